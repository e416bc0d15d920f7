#include <algorithm>
#include <map>
#include <numeric>

#include "mdrkit/error.hpp"
#include "mdrkit/semantics.hpp"

namespace mdrkit {

namespace {

const Op kOps[] = {Op::Meet, Op::Join, Op::Fuse, Op::Impl};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  Partition partition() {
    int n = static_cast<int>(parent.size());
    Partition p(n);
    for (int i = 0; i < n; ++i) p[i] = find(i);
    return p;
  }
};

UnionFind from_partition(const Partition& p) {
  UnionFind uf(static_cast<int>(p.size()));
  for (int i = 0; i < static_cast<int>(p.size()); ++i) uf.merge(i, p[i]);
  return uf;
}

// Calls visit for every bag with the same class counts as g.
bool for_each_variant(const Bag& g, const Partition& p, const std::function<bool(const Bag&)>& visit) {
  int n = static_cast<int>(g.size());
  std::vector<int> classes;
  std::map<int, int> per_class;
  for (int i = 0; i < n; ++i) per_class[p[i]] += g[i];
  for (const auto& [c, k] : per_class) classes.push_back(c);
  Bag cur(n, 0);
  std::function<bool(std::size_t)> by_class;
  std::function<bool(std::size_t, int, int)> spread = [&](std::size_t ci, int member, int left) -> bool {
    int c = classes[ci];
    int next = member + 1;
    while (next < n && p[next] != c) ++next;
    if (next >= n) {
      cur[member] = left;
      bool go = by_class(ci + 1);
      cur[member] = 0;
      return go;
    }
    for (int k = 0; k <= left; ++k) {
      cur[member] = k;
      if (!spread(ci, next, left - k)) {
        cur[member] = 0;
        return false;
      }
    }
    cur[member] = 0;
    return true;
  };
  by_class = [&](std::size_t ci) -> bool {
    if (ci == classes.size()) return visit(cur);
    return spread(ci, classes[ci], per_class[classes[ci]]);
  };
  return by_class(0);
}

}  // namespace

Partition identity_partition(int n) {
  Partition p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Partition total_partition(int n) { return Partition(n, 0); }

Partition partition_join(const Partition& a, const Partition& b) {
  UnionFind uf = from_partition(a);
  for (int i = 0; i < static_cast<int>(b.size()); ++i) uf.merge(i, b[i]);
  return uf.partition();
}

bool partition_leq(const Partition& a, const Partition& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] != b[a[i]]) return false;
  return true;
}

std::string partition_str(const Partition& p, const std::vector<std::string>& names) {
  std::string out;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (p[i] != i) continue;
    out += out.empty() ? "{" : " {";
    bool first = true;
    for (int j = i; j < static_cast<int>(p.size()); ++j)
      if (p[j] == i) {
        out += (first ? "" : ",") + names[j];
        first = false;
      }
    out += "}";
  }
  return out;
}

bool is_congruence(const FiniteAlgebra& a, const Partition& p) {
  int n = a.size();
  for (Op op : kOps) {
    if (!a.has_op(op)) continue;
    for (int x = 0; x < n; ++x)
      for (int x2 = 0; x2 < n; ++x2) {
        if (p[x] != p[x2] || x == x2) continue;
        for (int y = 0; y < n; ++y) {
          if (p[a.apply(op, x, y)] != p[a.apply(op, x2, y)]) return false;
          if (p[a.apply(op, y, x)] != p[a.apply(op, y, x2)]) return false;
        }
      }
  }
  return true;
}

Partition congruence_closure(const FiniteAlgebra& a, Partition p) {
  int n = a.size();
  UnionFind uf = from_partition(p);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Op op : kOps) {
      if (!a.has_op(op)) continue;
      for (int x = 0; x < n; ++x)
        for (int x2 = x + 1; x2 < n; ++x2) {
          if (uf.find(x) != uf.find(x2)) continue;
          for (int y = 0; y < n; ++y) {
            changed |= uf.merge(a.apply(op, x, y), a.apply(op, x2, y));
            changed |= uf.merge(a.apply(op, y, x), a.apply(op, y, x2));
          }
        }
    }
  }
  return uf.partition();
}

std::vector<Partition> congruences(const FiniteAlgebra& a) {
  int n = a.size();
  if (n > 5) throw SizeGuardError("congruence enumeration refuses more than 5 elements");
  std::vector<Partition> principal;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      Partition p = identity_partition(n);
      p[y] = x;
      principal.push_back(congruence_closure(a, p));
    }
  std::set<Partition> all{identity_partition(n)};
  std::vector<Partition> work{identity_partition(n)};
  while (!work.empty()) {
    Partition c = work.back();
    work.pop_back();
    for (const auto& pr : principal) {
      Partition j = partition_join(c, pr);
      if (all.insert(j).second) work.push_back(j);
    }
  }
  return std::vector<Partition>(all.begin(), all.end());
}

bool compatible(const Downset& f, const Partition& p) {
  for (const auto& g : f.gens) {
    bool ok = for_each_variant(g, p, [&](const Bag& v) { return f.contains(v); });
    if (!ok) return false;
  }
  return true;
}

namespace {

Partition largest(const std::vector<Partition>& cands, const char* what) {
  for (const auto& c : cands) {
    bool top = std::all_of(cands.begin(), cands.end(), [&](const Partition& o) { return partition_leq(o, c); });
    if (top) return c;
  }
  throw InternalError(std::string("no largest compatible congruence for ") + what);
}

}  // namespace

Partition leibniz(const Hypermatrix& h) {
  std::vector<Partition> ok;
  for (const auto& c : congruences(h.algebra))
    if (compatible(h.filter, c)) ok.push_back(c);
  return largest(ok, "a hypermatrix");
}

namespace {

struct QuotientMap {
  std::vector<int> index;  // element -> class number
  std::vector<int> reps;
};

QuotientMap quotient_map(const Partition& p) {
  QuotientMap q;
  q.index.assign(p.size(), -1);
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    if (p[i] == i) {
      q.index[i] = static_cast<int>(q.reps.size());
      q.reps.push_back(i);
    }
  for (int i = 0; i < static_cast<int>(p.size()); ++i) q.index[i] = q.index[p[i]];
  return q;
}

FiniteAlgebra quotient_algebra(const FiniteAlgebra& a, const QuotientMap& q) {
  FiniteAlgebra out;
  out.name = a.name;
  int m = static_cast<int>(q.reps.size());
  for (int r : q.reps) out.elements.push_back(a.elements[r]);
  auto table = [&](Op op, std::vector<int>& t) {
    if (!a.has_op(op)) return;
    t.resize(static_cast<std::size_t>(m) * m);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) t[x * m + y] = q.index[a.apply(op, q.reps[x], q.reps[y])];
  };
  table(Op::Meet, out.meet);
  table(Op::Join, out.join);
  table(Op::Fuse, out.fuse);
  table(Op::Impl, out.impl);
  out.one = a.one < 0 ? -1 : q.index[a.one];
  for (const auto& [name, v] : a.constants) out.constants.emplace_back(name, q.index[v]);
  return out;
}

}  // namespace

Hypermatrix quotient(const Hypermatrix& h, const Partition& p) {
  if (!is_congruence(h.algebra, p)) throw InputError("partition is not a congruence");
  QuotientMap q = quotient_map(p);
  int m = static_cast<int>(q.reps.size());
  std::vector<Bag> gens;
  for (const auto& g : h.filter.gens) {
    Bag b(m, 0);
    for (std::size_t i = 0; i < g.size(); ++i) b[q.index[i]] += g[i];
    gens.push_back(b);
  }
  return Hypermatrix{quotient_algebra(h.algebra, q), make_downset(m, gens)};
}

Hypermatrix reduce_model(const Hypermatrix& h) { return quotient(h, leibniz(h)); }

// Gentzen side

std::string SequentModel::str() const {
  std::string out = "sequents over " + algebra.name + ":";
  for (const auto& s : sequences) {
    out += " <";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + algebra.elements[s[i]];
    out += ">";
  }
  return out + "\n";
}

SequentModel to_sequents(const Hypermatrix& h) {
  SequentModel s;
  s.algebra = h.algebra;
  for (const auto& b : h.filter.members()) {
    std::vector<int> seq;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (int k = 0; k < b[i]; ++k) seq.push_back(static_cast<int>(i));
    do {
      s.sequences.insert(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
  }
  return s;
}

Hypermatrix to_multisets(const SequentModel& s) {
  int n = s.algebra.size();
  std::set<Bag> bags;
  for (const auto& seq : s.sequences) bags.insert(bag_of(n, seq));
  for (const auto& b : bags)
    for (int i = 0; i < n; ++i) {
      if (b[i] == 0) continue;
      Bag smaller = b;
      --smaller[i];
      if (!bags.count(smaller))
        throw InputError("multisets of the sequences are not a downset: missing " +
                         bag_str(smaller, s.algebra.elements));
    }
  return Hypermatrix{s.algebra, make_downset(n, std::vector<Bag>(bags.begin(), bags.end()))};
}

bool sequent_compatible(const SequentModel& s, const Partition& p) {
  int n = s.algebra.size();
  for (const auto& seq : s.sequences) {
    std::vector<int> cur = seq;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
      if (i == seq.size()) return s.sequences.count(cur) > 0;
      for (int b = 0; b < n; ++b) {
        if (p[b] != p[seq[i]]) continue;
        cur[i] = b;
        if (!go(i + 1)) return false;
      }
      cur[i] = seq[i];
      return true;
    };
    if (!go(0)) return false;
  }
  return true;
}

Partition leibniz_sequents(const SequentModel& s) {
  std::vector<Partition> ok;
  for (const auto& c : congruences(s.algebra))
    if (sequent_compatible(s, c)) ok.push_back(c);
  return largest(ok, "a sequent model");
}

SequentModel reduce_sequents(const SequentModel& s) {
  QuotientMap q = quotient_map(leibniz_sequents(s));
  SequentModel out;
  out.algebra = quotient_algebra(s.algebra, q);
  for (const auto& seq : s.sequences) {
    std::vector<int> m;
    for (int x : seq) m.push_back(q.index[x]);
    out.sequences.insert(m);
  }
  return out;
}

namespace {

bool same_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  return a.elements == b.elements && a.meet == b.meet && a.join == b.join && a.fuse == b.fuse &&
         a.impl == b.impl && a.one == b.one && a.constants == b.constants;
}

}  // namespace

Report gentzen_check(const Hypermatrix& h) {
  Report r;
  SequentModel s = to_sequents(h);
  Hypermatrix back = to_multisets(s);
  if (!(back.filter == h.filter))
    r.add("roundtrip", h.filter.str(h.algebra.elements) + " became " + back.filter.str(h.algebra.elements));
  if (!(to_sequents(back).sequences == s.sequences)) r.add("sequent roundtrip", "sequence sets differ");
  SequentModel left = to_sequents(reduce_model(h));
  SequentModel right = reduce_sequents(s);
  if (!same_algebra(left.algebra, right.algebra) || left.sequences != right.sequences)
    r.add("reduction commutes", "reduce-then-bridge " + left.str() + " vs bridge-then-reduce " + right.str());
  return r;
}

}  // namespace mdrkit
