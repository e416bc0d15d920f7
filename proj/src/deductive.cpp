#include "mdrkit/deductive.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "mdrkit/error.hpp"

namespace mdrkit {

namespace {

const std::string& nm(const FinitePomonoid& p, int a) { return p.elements[a]; }

std::string pair_str(const FinitePomonoid& p, int a, int b) {
  return "(" + nm(p, a) + "," + nm(p, b) + ")";
}

std::string rows_str(const FinitePomonoid& p, const std::vector<Mask>& rows, const char* sep) {
  std::string out;
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (has(rows[a], b)) out += (out.empty() ? "" : " ") + nm(p, a) + sep + nm(p, b);
  return out;
}

void require_base(const BasePtr& base) {
  if (!base) throw InputError("deductive structure without a base pomonoid");
}

// Transitive and compatible closure in place; rows already contain ≥.
void close_rows(const FinitePomonoid& p, std::vector<Mask>& rows) {
  int n = p.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        if (has(rows[a], k) && (rows[k] & ~rows[a])) {
          rows[a] |= rows[k];
          changed = true;
        }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!has(rows[a], b)) continue;
        for (int c = 0; c < n; ++c) {
          int ac = p.plus(a, c), bc = p.plus(b, c);
          if (!has(rows[ac], bc)) {
            rows[ac] |= bit(bc);
            changed = true;
          }
        }
      }
  }
}

void require_valid(const Report& r, const char* what) {
  if (!r.ok()) throw InputError(std::string("invalid ") + what + ": " + r.violations().front().axiom);
}

std::vector<Mask> sorted_unique(std::vector<Mask> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Mask delta_of_family(const std::vector<Mask>& family, int x, Mask all) {
  Mask m = all;
  for (Mask c : family)
    if (has(c, x)) m &= c;
  return m;
}

}  // namespace

std::string DeductiveRelation::str() const { return rows_str(*base, rows, "|-"); }

std::string DeductiveOperator::str() const {
  std::string out;
  for (int a = 0; a < base->size(); ++a)
    out += (a ? " " : "") + nm(*base, a) + ":" + mask_str(image[a], base->elements);
  return out;
}

std::string DeductiveSystem::str() const {
  std::string out;
  for (Mask m : members) out += (out.empty() ? "" : " ") + mask_str(m, base->elements);
  return out;
}

DeductiveRelation least_dr(BasePtr base) {
  require_base(base);
  DeductiveRelation d{base, std::vector<Mask>(base->size())};
  for (int a = 0; a < base->size(); ++a) d.rows[a] = base->below(a);
  return d;
}

DeductiveRelation full_dr(BasePtr base) {
  require_base(base);
  return DeductiveRelation{base, std::vector<Mask>(base->size(), base->all())};
}

DeductiveRelation dr_closure(BasePtr base, std::vector<Mask> rows) {
  require_base(base);
  if (static_cast<int>(rows.size()) != base->size()) throw InputError("relation does not match its base");
  for (int a = 0; a < base->size(); ++a) rows[a] |= base->below(a);
  close_rows(*base, rows);
  return DeductiveRelation{base, rows};
}

Report validate(const DeductiveRelation& d) {
  require_base(d.base);
  const FinitePomonoid& p = *d.base;
  int n = p.size();
  if (static_cast<int>(d.rows.size()) != n) throw InputError("relation does not match its base");
  Report r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (p.leq(a, b) && !d.entails(b, a)) r.add("generalised reflexivity", pair_str(p, b, a));
      for (int c = 0; c < n; ++c) {
        if (d.entails(a, b) && d.entails(b, c) && !d.entails(a, c))
          r.add("transitivity", "(" + nm(p, a) + "," + nm(p, b) + "," + nm(p, c) + ")");
        if (d.entails(a, b) && !d.entails(p.plus(a, c), p.plus(b, c)))
          r.add("compatibility", "(" + nm(p, a) + "," + nm(p, b) + "," + nm(p, c) + ")");
      }
    }
  if (!r.ok()) return r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!d.entails(a, b)) continue;
      for (int c = 0; c < n; ++c) {
        if (!d.entails(p.plus(c, a), b)) throw InternalError("monotonicity fails on a DR");
        for (int e = 0; e < n; ++e)
          if (d.entails(p.plus(c, b), e) && !d.entails(p.plus(c, a), e))
            throw InternalError("cut fails on a DR");
      }
    }
  return r;
}

Report validate(const DeductiveOperator& d) {
  require_base(d.base);
  const FinitePomonoid& p = *d.base;
  int n = p.size();
  if (static_cast<int>(d.image.size()) != n) throw InputError("operator does not match its base");
  Report r;
  for (int a = 0; a < n; ++a) {
    if (d.image[a] & ~p.all()) throw InputError("operator image leaves the carrier");
    if (!has(d.image[a], a)) r.add("enlargement", nm(p, a));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (p.leq(a, b) && (d.image[a] & ~d.image[b])) r.add("order preservation", pair_str(p, a, b));
      if (!has(d.image[b], a)) continue;
      if (d.image[a] & ~d.image[b]) r.add("idempotency", pair_str(p, a, b));
      for (int c = 0; c < n; ++c)
        if (!has(d.image[p.plus(b, c)], p.plus(a, c)))
          r.add("compatibility", "(" + nm(p, a) + "," + nm(p, b) + "," + nm(p, c) + ")");
    }
  return r;
}

Report validate(const DeductiveSystem& d) {
  require_base(d.base);
  const FinitePomonoid& p = *d.base;
  int n = p.size();
  Report r;
  for (Mask c : d.members) {
    if (c & ~p.all()) throw InputError("system member leaves the carrier");
    if (!p.is_downset(c)) r.add("downset members", mask_str(c, p.elements));
  }
  std::vector<Mask> delta(n);
  for (int x = 0; x < n; ++x) delta[x] = delta_of_family(d.members, x, p.all());
  if (sorted_unique(delta) != sorted_unique(d.members)) r.add("delta image", "the images of the induced operator differ from the family");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (delta[x] & ~delta[y]) continue;
      for (int z = 0; z < n; ++z)
        if (delta[p.plus(x, z)] & ~delta[p.plus(y, z)])
          r.add("compatibility", "(" + nm(p, x) + "," + nm(p, y) + "," + nm(p, z) + ")");
    }
  return r;
}

DeductiveOperator to_do(const DeductiveRelation& d) {
  require_valid(validate(d), "deductive relation");
  return DeductiveOperator{d.base, d.rows};
}

DeductiveSystem to_ds(const DeductiveRelation& d) {
  require_valid(validate(d), "deductive relation");
  return DeductiveSystem{d.base, sorted_unique(d.rows)};
}

DeductiveRelation to_dr(const DeductiveOperator& d) {
  require_valid(validate(d), "deductive operator");
  DeductiveRelation out{d.base, std::vector<Mask>(d.base->size(), 0)};
  for (int a = 0; a < d.base->size(); ++a)
    for (int b = 0; b < d.base->size(); ++b)
      if (has(d.image[a], b)) out.rows[a] |= bit(b);
  return out;
}

DeductiveSystem to_ds(const DeductiveOperator& d) {
  require_valid(validate(d), "deductive operator");
  return DeductiveSystem{d.base, sorted_unique(d.image)};
}

DeductiveOperator to_do(const DeductiveSystem& d) {
  require_valid(validate(d), "deductive system");
  DeductiveOperator out{d.base, std::vector<Mask>(d.base->size())};
  for (int x = 0; x < d.base->size(); ++x) out.image[x] = delta_of_family(d.members, x, d.base->all());
  return out;
}

DeductiveRelation to_dr(const DeductiveSystem& d) {
  require_valid(validate(d), "deductive system");
  DeductiveRelation out{d.base, std::vector<Mask>(d.base->size(), 0)};
  for (int a = 0; a < d.base->size(); ++a) {
    Mask delta = delta_of_family(d.members, a, d.base->all());
    for (int b = 0; b < d.base->size(); ++b)
      if (has(delta, b)) out.rows[a] |= bit(b);
  }
  return out;
}

bool leq(const DeductiveRelation& x, const DeductiveRelation& y) {
  for (std::size_t a = 0; a < x.rows.size(); ++a)
    if (x.rows[a] & ~y.rows[a]) return false;
  return true;
}

bool leq(const DeductiveOperator& x, const DeductiveOperator& y) {
  for (std::size_t a = 0; a < x.image.size(); ++a)
    if (x.image[a] & ~y.image[a]) return false;
  return true;
}

bool leq(const DeductiveSystem& x, const DeductiveSystem& y) {
  return std::includes(x.members.begin(), x.members.end(), y.members.begin(), y.members.end());
}

bool lex_less(const DeductiveRelation& x, const DeductiveRelation& y) {
  int n = x.base->size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (has(x.rows[a], b) != has(y.rows[a], b)) return !has(x.rows[a], b);
  return false;
}

Census<DeductiveRelation> enumerate_drs(BasePtr base, const EnumOptions& opt) {
  require_base(base);
  require_valid(validate(*base), "pomonoid");
  const FinitePomonoid& p = *base;
  int n = p.size();
  if (n > opt.max_carrier)
    throw SizeGuardError("DR enumeration refuses carriers larger than " + std::to_string(opt.max_carrier));
  Census<DeductiveRelation> out;
  std::vector<Mask> falses(n, 0);
  bool stop = false;
  std::function<void(int, const std::vector<Mask>&)> go = [&](int pos, const std::vector<Mask>& cur) {
    if (stop) return;
    if (pos == n * n) {
      if (out.items.size() >= opt.cap) {
        out.truncated = true;
        stop = true;
        return;
      }
      out.items.push_back(DeductiveRelation{base, cur});
      return;
    }
    int a = pos / n, b = pos % n;
    if (has(cur[a], b)) {
      go(pos + 1, cur);
      return;
    }
    falses[a] |= bit(b);
    go(pos + 1, cur);
    falses[a] &= ~bit(b);
    std::vector<Mask> next = cur;
    next[a] |= bit(b);
    close_rows(p, next);
    for (int x = 0; x < n; ++x)
      if (next[x] & falses[x]) return;
    go(pos + 1, next);
  };
  go(0, least_dr(base).rows);
  return out;
}

Census<DeductiveOperator> enumerate_dos_brute(BasePtr base) {
  require_base(base);
  int n = base->size();
  if (n > 4) throw SizeGuardError("brute-force DO enumeration refuses carriers larger than 4");
  Census<DeductiveOperator> out;
  std::vector<Mask> img(n, 0);
  Mask limit = Mask{1} << n;
  std::function<void(int)> go = [&](int a) {
    if (a == n) {
      DeductiveOperator d{base, img};
      if (validate(d).ok()) out.items.push_back(d);
      return;
    }
    for (Mask m = 0; m < limit; ++m) {
      if (!has(m, a)) continue;
      img[a] = m;
      go(a + 1);
    }
  };
  go(0);
  return out;
}

Census<DeductiveSystem> enumerate_dss_brute(BasePtr base) {
  require_base(base);
  int n = base->size();
  if (n > 4) throw SizeGuardError("brute-force DS enumeration refuses carriers larger than 4");
  std::vector<Mask> downsets;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (base->is_downset(m)) downsets.push_back(m);
  Census<DeductiveSystem> out;
  std::size_t k = downsets.size();
  for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << k); ++sel) {
    DeductiveSystem d{base, {}};
    for (std::size_t i = 0; i < k; ++i)
      if ((sel >> i) & 1U) d.members.push_back(downsets[i]);
    std::sort(d.members.begin(), d.members.end());
    if (validate(d).ok()) out.items.push_back(d);
  }
  return out;
}

TheoryReport theories(const DeductiveRelation& d) {
  require_valid(validate(d), "deductive relation");
  const FinitePomonoid& p = *d.base;
  int n = p.size();
  if (n > 20) throw SizeGuardError("theory enumeration refuses carriers larger than 20");
  TheoryReport t;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    bool upset = true;
    for (int a = 0; a < n && upset; ++a)
      if (has(m, a) && (d.rows[a] & ~m)) upset = false;
    if (upset) t.theories.push_back(m);
  }
  t.principal = d.rows;
  t.theorems = d.rows[p.zero];
  std::vector<Mask> classes = sorted_unique(d.rows);
  int k = static_cast<int>(classes.size());
  auto idx = [&](Mask m) {
    return static_cast<int>(std::lower_bound(classes.begin(), classes.end(), m) - classes.begin());
  };
  std::vector<std::string> names;
  for (Mask m : classes) names.push_back(mask_str(m, p.elements));
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k));
  std::vector<std::vector<int>> add(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) leq[i][j] = (classes[i] & ~classes[j]) == 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int i = idx(d.rows[a]), j = idx(d.rows[b]);
      int s = idx(d.rows[p.plus(a, b)]);
      if (add[i][j] != -1 && add[i][j] != s)
        t.checks.add("sum well-defined", "Th(" + nm(p, a) + ")+Th(" + nm(p, b) + ")");
      add[i][j] = s;
    }
  t.th_pomonoid = make_pomonoid("Th", names, leq, add, idx(d.rows[p.zero]));
  t.checks.merge(validate(t.th_pomonoid), "Th pomonoid ");
  for (int a = 0; a < n; ++a) t.th_map.push_back(idx(d.rows[a]));
  std::vector<bool> hit(k, false);
  for (int a = 0; a < n; ++a) {
    hit[t.th_map[a]] = true;
    for (int b = 0; b < n; ++b) {
      if (p.leq(a, b) && !t.th_pomonoid.leq(t.th_map[a], t.th_map[b]))
        t.checks.add("Th monotone", pair_str(p, a, b));
      if (t.th_map[p.plus(a, b)] != t.th_pomonoid.plus(t.th_map[a], t.th_map[b]))
        t.checks.add("Th additive", pair_str(p, a, b));
    }
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) t.checks.add("Th surjective", "unreached class");
  for (Mask th : t.theories) {
    Mask u = 0;
    for (int a = 0; a < n; ++a)
      if (has(th, a)) u |= d.rows[a];
    if (u != th) t.checks.add("union of principal theories", mask_str(th, p.elements));
  }
  return t;
}

DeductiveOperator do_meet(const std::vector<DeductiveOperator>& ds) {
  if (ds.empty()) throw InputError("meet of an empty family of operators needs a base");
  DeductiveOperator out{ds.front().base, std::vector<Mask>(ds.front().base->size(), ds.front().base->all())};
  for (const auto& d : ds) {
    if (d.base != out.base && !(d.base->add == out.base->add && d.base->above == out.base->above))
      throw InputError("operators on different bases");
    for (std::size_t a = 0; a < out.image.size(); ++a) out.image[a] &= d.image[a];
  }
  return out;
}

// Closure structures

namespace {

void guard_powerset(int n) {
  if (n > 4) throw SizeGuardError("powerset materialization refuses carriers larger than 4");
}

std::string set_str(Mask m, const std::vector<std::string>& names) { return mask_str(m, names); }

}  // namespace

FiniteAcr acr_from_rules(const std::vector<std::string>& names, const std::vector<AcrRule>& rules) {
  int n = static_cast<int>(names.size());
  guard_powerset(n);
  FiniteAcr a{names, std::vector<Mask>(std::size_t{1} << n)};
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    Mask c = x;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules) {
        if (r.conclusion < 0 || r.conclusion >= n) throw InputError("rule conclusion out of range");
        if ((r.premises & ~c) == 0 && !has(c, r.conclusion)) {
          c |= bit(r.conclusion);
          changed = true;
        }
      }
    }
    a.closure[x] = c;
  }
  return a;
}

Report validate(const FiniteAcr& a) {
  int n = a.size();
  guard_powerset(n);
  Report r;
  Mask top = Mask{1} << n;
  if (a.closure.size() != top) throw InputError("ACR table is not total");
  for (Mask x = 0; x < top; ++x) {
    if (x & ~a.closure[x]) r.add("reflexivity", set_str(x, a.names));
    for (Mask y = 0; y < top; ++y) {
      if ((x & ~y) == 0 && (a.closure[x] & ~a.closure[y]))
        r.add("monotonicity", set_str(x, a.names) + " " + set_str(y, a.names));
      // Cut: Y ⊢ φ and X ⊢ ψ for all ψ ∈ Y imply X ⊢ φ.
      if ((y & ~a.closure[x]) == 0 && (a.closure[y] & ~a.closure[x]))
        r.add("cut", set_str(x, a.names) + " " + set_str(y, a.names));
    }
  }
  return r;
}

Report validate(const ClosureOperator& c) {
  int n = static_cast<int>(c.names.size());
  guard_powerset(n);
  Report r;
  Mask top = Mask{1} << n;
  if (c.table.size() != top) throw InputError("closure table is not total");
  for (Mask x = 0; x < top; ++x) {
    if (x & ~c.table[x]) r.add("extensive", set_str(x, c.names));
    if (c.table[c.table[x]] != c.table[x]) r.add("idempotent", set_str(x, c.names));
    for (Mask y = 0; y < top; ++y)
      if ((x & ~y) == 0 && (c.table[x] & ~c.table[y])) r.add("monotone", set_str(x, c.names));
  }
  return r;
}

Report validate(const ClosureSystem& c) {
  int n = static_cast<int>(c.names.size());
  Report r;
  Mask all = full_mask(n);
  if (!std::binary_search(c.members.begin(), c.members.end(), all)) r.add("contains carrier", set_str(all, c.names));
  for (Mask x : c.members)
    for (Mask y : c.members)
      if (!std::binary_search(c.members.begin(), c.members.end(), x & y))
        r.add("closed under intersection", set_str(x, c.names) + " " + set_str(y, c.names));
  return r;
}

ClosureOperator acr_to_clop(const FiniteAcr& a) {
  ClosureOperator c{a.names, std::vector<Mask>(a.closure.size(), 0)};
  for (Mask x = 0; x < a.closure.size(); ++x)
    for (int i = 0; i < a.size(); ++i)
      if (a.entails(x, i)) c.table[x] |= bit(i);
  return c;
}

ClosureSystem acr_to_clos(const FiniteAcr& a) {
  ClosureSystem c{a.names, {}};
  for (Mask t = 0; t < a.closure.size(); ++t) {
    bool closed = true;
    for (int i = 0; i < a.size() && closed; ++i)
      if (a.entails(t, i) && !has(t, i)) closed = false;
    if (closed) c.members.push_back(t);
  }
  return c;
}

FiniteAcr clop_to_acr(const ClosureOperator& c) {
  FiniteAcr a{c.names, std::vector<Mask>(c.table.size(), 0)};
  for (Mask x = 0; x < c.table.size(); ++x)
    for (int i = 0; i < static_cast<int>(c.names.size()); ++i)
      if (has(c.table[x], i)) a.closure[x] |= bit(i);
  return a;
}

ClosureSystem clop_to_clos(const ClosureOperator& c) {
  ClosureSystem s{c.names, {}};
  for (Mask x = 0; x < c.table.size(); ++x)
    if (c.table[x] == x) s.members.push_back(x);
  return s;
}

FiniteAcr clos_to_acr(const ClosureSystem& c) {
  int n = static_cast<int>(c.names.size());
  guard_powerset(n);
  FiniteAcr a{c.names, std::vector<Mask>(std::size_t{1} << n, 0)};
  for (Mask x = 0; x < a.closure.size(); ++x)
    for (int i = 0; i < n; ++i) {
      bool all = true;
      for (Mask m : c.members)
        if ((x & ~m) == 0 && !has(m, i)) all = false;
      if (all) a.closure[x] |= bit(i);
    }
  return a;
}

ClosureOperator clos_to_clop(const ClosureSystem& c) {
  int n = static_cast<int>(c.names.size());
  guard_powerset(n);
  ClosureOperator op{c.names, std::vector<Mask>(std::size_t{1} << n, 0)};
  for (Mask x = 0; x < op.table.size(); ++x) {
    Mask m = full_mask(n);
    for (Mask s : c.members)
      if ((x & ~s) == 0) m &= s;
    op.table[x] = m;
  }
  return op;
}

FiniteAcr bj_companion(const DeductiveRelation& d) {
  require_valid(validate(d), "deductive relation");
  int n = d.base->size();
  guard_powerset(n);
  FiniteAcr a{d.base->elements, std::vector<Mask>(std::size_t{1} << n, 0)};
  for (Mask x = 0; x < a.closure.size(); ++x)
    for (int i = 0; i < n; ++i)
      for (int y = 0; y < n; ++y)
        if (has(x, y) && d.entails(y, i)) a.closure[x] |= bit(i);
  return a;
}

ClosureOperator bj_companion(const DeductiveOperator& d) {
  require_valid(validate(d), "deductive operator");
  int n = d.base->size();
  guard_powerset(n);
  ClosureOperator c{d.base->elements, std::vector<Mask>(std::size_t{1} << n, 0)};
  for (Mask x = 0; x < c.table.size(); ++x)
    for (int y = 0; y < n; ++y)
      if (has(x, y)) c.table[x] |= d.image[y];
  return c;
}

ClosureSystem bj_companion(const DeductiveSystem& d) {
  require_valid(validate(d), "deductive system");
  int n = d.base->size();
  guard_powerset(n);
  std::set<Mask> unions{0};
  for (Mask c : d.members) {
    std::set<Mask> next = unions;
    for (Mask u : unions) next.insert(u | c);
    unions = std::move(next);
  }
  return ClosureSystem{d.base->elements, std::vector<Mask>(unions.begin(), unions.end())};
}

Report bj_diagram_check(BasePtr base) {
  require_base(base);
  guard_powerset(base->size());
  Report r;
  auto drs = enumerate_drs(base).items;
  auto dos = enumerate_dos_brute(base).items;
  auto dss = enumerate_dss_brute(base).items;
  for (const auto& d : drs) {
    FiniteAcr lifted = bj_companion(d);
    if (!validate(lifted).ok()) r.add("BJ companion is an ACR", d.str());
    if (bj_companion(to_do(d)) != acr_to_clop(lifted)) r.add("Rel→Op square", d.str());
    if (bj_companion(to_ds(d)) != acr_to_clos(lifted)) r.add("Rel→Sys square", d.str());
    TheoryReport th = theories(d);
    ClosureSystem closed = acr_to_clos(lifted);
    if (th.theories != closed.members) r.add("theories are BJ-closed sets", d.str());
    if (!validate(ClosureSystem{base->elements, th.theories}).ok()) r.add("theories form a closure system", d.str());
  }
  for (const auto& d : dos) {
    ClosureOperator lifted = bj_companion(d);
    if (!validate(lifted).ok()) r.add("BJ companion is a closure operator", d.str());
    if (bj_companion(to_ds(d)) != clop_to_clos(lifted)) r.add("Op→Sys square", d.str());
    if (bj_companion(to_dr(d)) != clop_to_acr(lifted)) r.add("Op→Rel square", d.str());
  }
  for (const auto& d : dss) {
    ClosureSystem lifted = bj_companion(d);
    if (!validate(lifted).ok()) r.add("BJ companion is a closure system", d.str());
    if (bj_companion(to_dr(d)) != clos_to_acr(lifted)) r.add("Sys→Rel square", d.str());
    if (bj_companion(to_do(d)) != clos_to_clop(lifted)) r.add("Sys→Op square", d.str());
  }
  if (drs.size() != dos.size() || drs.size() != dss.size())
    r.add("census", std::to_string(drs.size()) + "/" + std::to_string(dos.size()) + "/" + std::to_string(dss.size()));
  return r;
}

DeductiveRelation dr_from_acr(const FiniteAcr& a) {
  int k = a.size();
  guard_powerset(k);
  auto base = std::make_shared<const FinitePomonoid>(powerset_pomonoid(k));
  int n = base->size();
  DeductiveRelation d{base, std::vector<Mask>(n, 0)};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if ((static_cast<Mask>(y) & ~a.closure[x]) == 0) d.rows[x] |= bit(y);
  Report r = validate(d);
  if (!r.ok()) throw InputError("lifted relation is not a DR: " + r.violations().front().axiom);
  return d;
}

// Modules

Check action_invariant_check(const FiniteModule& m, const DeductiveOperator& d) {
  const FinitePomonoid& R = m.carrier;
  int na = m.scalars.size(), nr = R.size();
  if (static_cast<int>(d.image.size()) != nr) throw InputError("operator does not match the module carrier");
  for (int s = 0; s < na; ++s)
    for (int b = 0; b < nr; ++b)
      for (int a = 0; a < nr; ++a)
        if (has(d.image[b], a) && !has(d.image[m.apply(s, b)], m.apply(s, a)))
          return {false, "(" + m.scalars.additive.elements[s] + "," + R.elements[a] + "," + R.elements[b] + ")"};
  return {};
}

QuotientModule quotient_module(const FiniteModule& m, const DeductiveOperator& d) {
  Report dv = validate(d);
  if (!dv.ok()) throw InputError("invalid deductive operator: " + dv.violations().front().axiom);
  Check inv = action_invariant_check(m, d);
  if (!inv.ok) throw InputError("operator is not action-invariant: " + inv.witness);
  const FinitePomonoid& R = m.carrier;
  int nr = R.size(), na = m.scalars.size();
  QuotientModule q;
  q.classes = sorted_unique(d.image);
  int k = static_cast<int>(q.classes.size());
  auto idx = [&](Mask c) {
    return static_cast<int>(std::lower_bound(q.classes.begin(), q.classes.end(), c) - q.classes.begin());
  };
  for (int a = 0; a < nr; ++a) q.morphism.push_back(idx(d.image[a]));
  std::vector<std::string> names;
  for (Mask c : q.classes) names.push_back(mask_str(c, R.elements));
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k));
  std::vector<std::vector<int>> add(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) leq[i][j] = (q.classes[i] & ~q.classes[j]) == 0;
  std::vector<int> act(static_cast<std::size_t>(na) * k, -1);
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < nr; ++b) {
      int i = q.morphism[a], j = q.morphism[b], s = q.morphism[R.plus(a, b)];
      if (add[i][j] != -1 && add[i][j] != s) q.report.add("sum well-defined", R.elements[a] + "," + R.elements[b]);
      add[i][j] = s;
    }
    for (int s = 0; s < na; ++s) {
      int& slot = act[s * k + q.morphism[a]];
      int v = q.morphism[m.apply(s, a)];
      if (slot != -1 && slot != v) q.report.add("action well-defined", R.elements[a]);
      slot = v;
    }
  }
  q.module.scalars = m.scalars;
  q.module.carrier = make_pomonoid(R.name + "/delta", names, leq, add, q.morphism[R.zero]);
  q.module.act = act;
  q.report.merge(validate(q.module), "quotient ");
  ModuleMorphism f{&m, &q.module, q.morphism};
  q.report.merge(validate(f), "delta ");
  return q;
}

Report validate(const ModuleMorphism& f) {
  if (!f.from || !f.to) throw InputError("morphism without modules");
  const FinitePomonoid& R = f.from->carrier;
  const FinitePomonoid& S = f.to->carrier;
  if (static_cast<int>(f.map.size()) != R.size()) throw InputError("morphism table is not total");
  for (int v : f.map)
    if (v < 0 || v >= S.size()) throw InputError("morphism leaves the target carrier");
  if (f.from->scalars.size() != f.to->scalars.size()) throw InputError("modules over different scalars");
  Report r;
  if (f.map[R.zero] != S.zero) r.add("preserves zero", R.elements[R.zero]);
  for (int a = 0; a < R.size(); ++a) {
    for (int b = 0; b < R.size(); ++b) {
      if (f.map[R.plus(a, b)] != S.plus(f.map[a], f.map[b])) r.add("preserves sum", pair_str(R, a, b));
      if (R.leq(a, b) && !S.leq(f.map[a], f.map[b])) r.add("monotone", pair_str(R, a, b));
    }
    for (int s = 0; s < f.from->scalars.size(); ++s)
      if (f.map[f.from->apply(s, a)] != f.to->apply(s, f.map[a]))
        r.add("preserves action", f.from->scalars.additive.elements[s] + "," + R.elements[a]);
  }
  return r;
}

KernelResult kernel_do(const ModuleMorphism& f) {
  Report mr = validate(f);
  if (!mr.ok()) throw InputError("not a module morphism: " + mr.violations().front().axiom);
  const FinitePomonoid& R = f.from->carrier;
  const FinitePomonoid& S = f.to->carrier;
  int n = R.size();
  KernelResult k;
  k.kernel.base = std::make_shared<const FinitePomonoid>(R);
  k.kernel.image.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < n; ++x)
      if (S.leq(f.map[x], f.map[a])) k.kernel.image[a] |= bit(x);
  k.report.merge(validate(k.kernel), "kernel ");
  Check inv = action_invariant_check(*f.from, k.kernel);
  if (!inv.ok) k.report.add("kernel action invariance", inv.witness);
  if (!k.report.ok()) return k;
  QuotientModule q = quotient_module(*f.from, k.kernel);
  k.report.merge(q.report);
  // f̂(f*(a)) = f(a) must be a well-defined bijection onto f[R] that
  // preserves and reflects the order, the sum and the action.
  int kc = q.module.carrier.size();
  std::vector<int> hat(kc, -1);
  for (int a = 0; a < n; ++a) {
    int c = q.morphism[a];
    if (hat[c] != -1 && hat[c] != f.map[a]) k.report.add("f-hat well-defined", R.elements[a]);
    hat[c] = f.map[a];
  }
  std::set<int> image(f.map.begin(), f.map.end());
  std::set<int> hit(hat.begin(), hat.end());
  if (hit != image || static_cast<int>(hit.size()) != kc) k.report.add("f-hat bijective", "image size mismatch");
  const FinitePomonoid& Q = q.module.carrier;
  for (int i = 0; i < kc; ++i)
    for (int j = 0; j < kc; ++j) {
      if (Q.leq(i, j) != S.leq(hat[i], hat[j])) k.report.add("f-hat order isomorphism", Q.elements[i] + "," + Q.elements[j]);
      if (hat[Q.plus(i, j)] != S.plus(hat[i], hat[j])) k.report.add("f-hat preserves sum", Q.elements[i] + "," + Q.elements[j]);
    }
  for (int s = 0; s < f.from->scalars.size(); ++s)
    for (int i = 0; i < kc; ++i)
      if (hat[q.module.apply(s, i)] != f.to->apply(s, hat[i])) k.report.add("f-hat preserves action", Q.elements[i]);
  return k;
}

Report cyclic_projective_witness(const FiniteModule& m, int v, int mu) {
  const FinitePomonoid& R = m.carrier;
  const FinitePoSemiring& A = m.scalars;
  if (v < 0 || v >= R.size()) throw InputError("witness element out of range");
  if (mu < 0 || mu >= A.size()) throw InputError("witness scalar out of range");
  Report r;
  if (m.apply(mu, v) != v) r.add("mu*v=v", A.additive.elements[mu] + "*" + R.elements[v]);
  Mask orbit = 0;
  for (int s = 0; s < A.size(); ++s) orbit |= bit(m.apply(s, v));
  for (int a = 0; a < R.size(); ++a)
    if (!has(orbit, a)) {
      r.add("A*{v}=R", R.elements[a] + " is not in the orbit of " + R.elements[v]);
      break;
    }
  for (int s = 0; s < A.size(); ++s)
    for (int t = 0; t < A.size(); ++t)
      if (R.leq(m.apply(s, v), m.apply(t, v)) && !A.additive.leq(A.times(s, mu), A.times(t, mu)))
        r.add("order reflection", A.additive.elements[s] + "," + A.additive.elements[t]);
  return r;
}

}  // namespace mdrkit
