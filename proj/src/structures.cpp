#include "mdrkit/structures.hpp"

#include "mdrkit/error.hpp"

namespace mdrkit {

std::string mask_str(Mask m, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (!has(m, i)) continue;
    if (!first) out += ",";
    out += names[i];
    first = false;
  }
  return out + "}";
}

Mask FinitePomonoid::below(int a) const {
  Mask m = 0;
  for (int b = 0; b < size(); ++b)
    if (leq(b, a)) m |= bit(b);
  return m;
}

int FinitePomonoid::index(const std::string& element) const {
  for (int i = 0; i < size(); ++i)
    if (elements[i] == element) return i;
  throw InputError("unknown element '" + element + "' in " + name);
}

bool FinitePomonoid::is_downset(Mask m) const {
  for (int a = 0; a < size(); ++a)
    if (has(m, a) && (below(a) & ~m)) return false;
  return true;
}

bool FinitePomonoid::is_upset(Mask m) const {
  for (int a = 0; a < size(); ++a)
    if (has(m, a) && (above[a] & ~m)) return false;
  return true;
}

Mask FinitePomonoid::downset_of(Mask m) const {
  Mask out = 0;
  for (int a = 0; a < size(); ++a)
    if (has(m, a)) out |= below(a);
  return out;
}

void FinitePomonoid::check_shape() const {
  int n = size();
  if (n == 0) throw InputError("pomonoid " + name + " has no elements");
  if (n > 64) throw SizeGuardError("pomonoid " + name + " exceeds 64 elements");
  if (static_cast<int>(above.size()) != n) throw InputError("order table of " + name + " is not total");
  if (static_cast<int>(add.size()) != n * n) throw InputError("addition table of " + name + " is not total");
  for (int v : add)
    if (v < 0 || v >= n) throw InputError("addition table of " + name + " leaves the carrier");
  if (zero < 0 || zero >= n) throw InputError("zero of " + name + " is out of range");
  for (Mask m : above)
    if (m & ~full_mask(n)) throw InputError("order table of " + name + " leaves the carrier");
}

FinitePomonoid make_pomonoid(const std::string& name, const std::vector<std::string>& elements,
                             const std::vector<std::vector<bool>>& leq,
                             const std::vector<std::vector<int>>& add, int zero) {
  FinitePomonoid p;
  p.name = name;
  p.elements = elements;
  int n = static_cast<int>(elements.size());
  if (static_cast<int>(leq.size()) != n || static_cast<int>(add.size()) != n)
    throw InputError("tables of " + name + " do not match the carrier");
  p.above.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(leq[a].size()) != n || static_cast<int>(add[a].size()) != n)
      throw InputError("tables of " + name + " do not match the carrier");
    for (int b = 0; b < n; ++b) {
      if (leq[a][b]) p.above[a] |= bit(b);
      p.add.push_back(add[a][b]);
    }
  }
  p.zero = zero;
  p.check_shape();
  return p;
}

namespace {

FinitePomonoid chain(const std::string& name, int n, bool truncated) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  std::vector<std::vector<int>> add(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    names.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) {
      leq[a][b] = a <= b;
      add[a][b] = truncated ? std::min(a + b, n - 1) : std::max(a, b);
    }
  }
  return make_pomonoid(name, names, leq, add, 0);
}

}  // namespace

FinitePomonoid truncated_sum(int n) { return chain("N" + std::to_string(n), n, true); }

FinitePomonoid max_chain(int n) { return chain("C" + std::to_string(n), n, false); }

FinitePomonoid powerset_pomonoid(int k) {
  if (k > 4) throw SizeGuardError("powerset pomonoid refuses |A| > 4");
  int n = 1 << k;
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  std::vector<std::vector<int>> add(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x) {
    std::string s = "{";
    for (int i = 0; i < k; ++i)
      if (x & (1 << i)) s += (s.size() > 1 ? "," : "") + std::string(1, static_cast<char>('a' + i));
    names.push_back(s + "}");
    for (int y = 0; y < n; ++y) {
      leq[x][y] = (x & ~y) == 0;
      add[x][y] = x | y;
    }
  }
  return make_pomonoid("P" + std::to_string(k), names, leq, add, 0);
}

namespace {

std::string tup(const FinitePomonoid& p, std::initializer_list<int> xs) {
  std::string out = "(";
  bool first = true;
  for (int x : xs) {
    if (!first) out += ",";
    out += p.elements[x];
    first = false;
  }
  return out + ")";
}

}  // namespace

Report validate(const FinitePomonoid& p) {
  p.check_shape();
  Report r;
  int n = p.size();
  for (int a = 0; a < n; ++a) {
    if (!p.leq(a, a)) r.add("reflexivity", tup(p, {a}));
    for (int b = 0; b < n; ++b) {
      if (a != b && p.leq(a, b) && p.leq(b, a)) r.add("antisymmetry", tup(p, {a, b}));
      if (p.plus(a, b) != p.plus(b, a)) r.add("commutativity", tup(p, {a, b}));
      for (int c = 0; c < n; ++c) {
        if (p.leq(a, b) && p.leq(b, c) && !p.leq(a, c)) r.add("transitivity", tup(p, {a, b, c}));
        if (p.plus(p.plus(a, b), c) != p.plus(a, p.plus(b, c))) r.add("associativity", tup(p, {a, b, c}));
        if (p.leq(a, b) && !p.leq(p.plus(a, c), p.plus(b, c))) r.add("compatibility", tup(p, {a, b, c}));
      }
    }
    if (p.plus(a, p.zero) != a) r.add("unit", tup(p, {a}));
    if (!p.leq(p.zero, a)) r.add("dual integrality", tup(p, {p.zero, a}));
  }
  return r;
}

Report validate(const FinitePoSemiring& s) {
  const FinitePomonoid& p = s.additive;
  Report r;
  r.merge(validate(p), "additive ");
  int n = p.size();
  if (static_cast<int>(s.mul.size()) != n * n) throw InputError("multiplication table is not total");
  for (int v : s.mul)
    if (v < 0 || v >= n) throw InputError("multiplication table leaves the carrier");
  if (s.one < 0 || s.one >= n) throw InputError("one is out of range");
  int z = p.zero;
  for (int a = 0; a < n; ++a) {
    if (s.times(a, s.one) != a || s.times(s.one, a) != a) r.add("multiplicative unit", tup(p, {a}));
    if (s.times(a, z) != z || s.times(z, a) != z) r.add("annihilation", tup(p, {a}));
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (s.times(s.times(a, b), c) != s.times(a, s.times(b, c)))
          r.add("multiplicative associativity", tup(p, {a, b, c}));
        if (s.times(a, p.plus(b, c)) != p.plus(s.times(a, b), s.times(a, c)))
          r.add("left distributivity", tup(p, {a, b, c}));
        if (s.times(p.plus(a, b), c) != p.plus(s.times(a, c), s.times(b, c)))
          r.add("right distributivity", tup(p, {a, b, c}));
        if (p.leq(a, b) && p.leq(z, c) &&
            (!p.leq(s.times(a, c), s.times(b, c)) || !p.leq(s.times(c, a), s.times(c, b))))
          r.add("multiplicative monotonicity", tup(p, {a, b, c}));
      }
    }
  }
  return r;
}

Report validate(const FiniteModule& m) {
  Report r;
  r.merge(validate(m.scalars), "scalar ");
  r.merge(validate(m.carrier), "carrier ");
  const FinitePomonoid& A = m.scalars.additive;
  const FinitePomonoid& R = m.carrier;
  int na = A.size(), nr = R.size();
  if (static_cast<int>(m.act.size()) != na * nr) throw InputError("action table is not total");
  for (int v : m.act)
    if (v < 0 || v >= nr) throw InputError("action table leaves the carrier");
  auto w = [&](int s, std::initializer_list<int> xs) {
    std::string out = "(" + A.elements[s];
    for (int x : xs) out += "," + R.elements[x];
    return out + ")";
  };
  for (int a = 0; a < nr; ++a) {
    if (m.apply(m.scalars.one, a) != a) r.add("action unit", w(m.scalars.one, {a}));
    if (m.apply(A.zero, a) != R.zero) r.add("action zero", w(A.zero, {a}));
  }
  for (int s = 0; s < na; ++s) {
    for (int a = 0; a < nr; ++a) {
      for (int t = 0; t < na; ++t) {
        if (m.apply(m.scalars.times(s, t), a) != m.apply(s, m.apply(t, a)))
          r.add("action associativity", w(s, {a}) + " with " + A.elements[t]);
        if (m.apply(A.plus(s, t), a) != R.plus(m.apply(s, a), m.apply(t, a)))
          r.add("scalar distributivity", w(s, {a}) + " with " + A.elements[t]);
        if (A.leq(s, t) && !R.leq(m.apply(s, a), m.apply(t, a)))
          r.add("scalar monotonicity", w(s, {a}) + " with " + A.elements[t]);
      }
      for (int b = 0; b < nr; ++b) {
        if (R.plus(m.apply(s, a), m.apply(s, b)) != m.apply(s, R.plus(a, b)))
          r.add("carrier distributivity", w(s, {a, b}));
        if (R.leq(a, b) && !R.leq(m.apply(s, a), m.apply(s, b)))
          r.add("carrier monotonicity", w(s, {a, b}));
      }
    }
  }
  return r;
}

FiniteModule regular_module(const FinitePoSemiring& s) {
  FiniteModule m;
  m.scalars = s;
  m.carrier = s.additive;
  m.act = s.mul;
  return m;
}

}  // namespace mdrkit
