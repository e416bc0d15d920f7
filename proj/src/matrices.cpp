#include <algorithm>
#include <set>

#include "mdrkit/error.hpp"
#include "mdrkit/semantics.hpp"

namespace mdrkit {

int MonoidMatrix::value(const Bag& x) const {
  int v = d.zero;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = 0; k < x[i]; ++k) v = d.plus(v, f[i]);
  return v;
}

bool MonoidMatrix::designated(const Bag& x) const {
  return free_d ? free_g.contains(x) : has(g, value(x));
}

std::string MonoidMatrix::str() const {
  if (free_d) return "monoid matrix over " + algebra.name + " free G " + free_g.str(algebra.elements) + "\n";
  std::string fs;
  for (int a = 0; a < algebra.size(); ++a)
    fs += (a ? " " : "") + algebra.elements[a] + "->" + d.elements[f[a]];
  return "monoid matrix over " + algebra.name + " D " + d.name + " G " + mask_str(g, d.elements) + " f " +
         fs + "\n";
}

namespace {

void for_each_bag(int n, int max_size, const std::function<void(const Bag&)>& visit) {
  Bag cur(n, 0);
  std::function<void(int, int)> go = [&](int i, int left) {
    if (i == n) {
      visit(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      go(i + 1, left - k);
    }
    cur[i] = 0;
  };
  go(0, max_size);
}

// Submonoid of D generated by the f-values: the attained designations.
Mask attained(const MonoidMatrix& m) {
  Mask seen = bit(m.d.zero);
  std::vector<int> work{m.d.zero};
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int a = 0; a < m.algebra.size(); ++a) {
      int w = m.d.plus(v, m.f[a]);
      if (!has(seen, w)) {
        seen |= bit(w);
        work.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Report validate(const MonoidMatrix& m) {
  m.algebra.check_shape();
  Report r;
  if (m.free_d) {
    if (m.free_g.n != m.algebra.size()) r.add("G width", std::to_string(m.free_g.n));
    return r;
  }
  m.d.check_shape();
  r.merge(validate(m.d), "D ");
  if (static_cast<int>(m.f.size()) != m.algebra.size()) throw InputError("f must be given on every element");
  for (int v : m.f)
    if (v < 0 || v >= m.d.size()) throw InputError("f value out of range");
  if ((m.g & ~m.d.all()) != 0) throw InputError("G leaves the carrier of D");
  if (!m.d.is_downset(m.g)) r.add("G downset", mask_str(m.g, m.d.elements));
  if (!r.ok()) return r;
  // f on A♭ is the additive extension; monotonicity is checked on small bags.
  int n = m.algebra.size();
  for_each_bag(n, 3, [&](const Bag& x) {
    for (int a = 0; a < n; ++a) {
      Bag y = x;
      ++y[a];
      if (!m.d.leq(m.value(x), m.value(y)))
        r.add("homomorphism", bag_str(x, m.algebra.elements) + " <= " + bag_str(y, m.algebra.elements));
    }
  });
  return r;
}

HyperResult to_hyper(const MonoidMatrix& m, int max_size) {
  HyperResult out;
  out.hyper.algebra = m.algebra;
  if (m.free_d) {
    out.hyper.filter = m.free_g;
    return out;
  }
  std::vector<Bag> in;
  for_each_bag(m.algebra.size(), max_size, [&](const Bag& x) {
    if (!m.designated(x)) return;
    in.push_back(x);
    if (bag_size(x) == max_size) out.truncated = true;
  });
  out.hyper.filter = make_downset(m.algebra.size(), in);
  return out;
}

MonoidMatrix from_hyper(const Hypermatrix& h) {
  MonoidMatrix m;
  m.algebra = h.algebra;
  m.free_d = true;
  m.free_g = h.filter;
  return m;
}

MonoidMatrix push(const MonoidMatrix& m, const FinitePomonoid& d2, const std::vector<int>& g) {
  if (m.free_d) throw InputError("push needs a finite designation pomonoid");
  if (static_cast<int>(g.size()) != m.d.size()) throw InputError("g must be given on every element of D");
  for (int v : g)
    if (v < 0 || v >= d2.size()) throw InputError("g value out of range");
  if (g[m.d.zero] != d2.zero) throw InputError("g does not preserve 0");
  for (int a = 0; a < m.d.size(); ++a)
    for (int b = 0; b < m.d.size(); ++b) {
      if (g[m.d.plus(a, b)] != d2.plus(g[a], g[b])) throw InputError("g does not preserve +");
      if (m.d.leq(a, b) && !d2.leq(g[a], g[b])) throw InputError("g is not monotone");
    }
  MonoidMatrix out;
  out.algebra = m.algebra;
  out.d = d2;
  Mask image = 0;
  for (int a = 0; a < m.d.size(); ++a)
    if (has(m.g, a)) image |= bit(g[a]);
  out.g = d2.downset_of(image);
  for (int v : m.f) out.f.push_back(g[v]);
  return out;
}

MonoidMatrix push_free(const MonoidMatrix& m, const FinitePomonoid& d, const std::vector<int>& f) {
  if (!m.free_d) throw InputError("push_free needs a free monoid matrix");
  MonoidMatrix out;
  out.algebra = m.algebra;
  out.d = d;
  out.f = f;
  if (static_cast<int>(f.size()) != m.algebra.size()) throw InputError("f must be given on every element");
  Mask image = 0;
  for (const auto& x : m.free_g.members()) image |= bit(out.value(x));
  out.g = d.downset_of(image);
  return out;
}

RoundtripReport roundtrip_check(const MonoidMatrix& m, int max_size) {
  if (m.free_d) throw InputError("roundtrip check needs a finite designation pomonoid");
  RoundtripReport r;
  // Every attained value is the sum of at most |D| f-values, so the bounded
  // preimage already reaches all of them once max_size >= |D|.
  if (max_size < m.d.size()) throw InputError("size bound below |D|");
  HyperResult h = to_hyper(m, max_size);
  r.truncated = h.truncated;
  HyperResult again = to_hyper(from_hyper(h.hyper), max_size);
  r.hyper_identity = again.hyper.filter == h.hyper.filter;
  MonoidMatrix pushed = push_free(from_hyper(h.hyper), m.d, m.f);
  r.pushed_g = pushed.g;
  r.attained_g = m.d.downset_of(m.g & attained(m));
  r.matrix_identity = pushed.g == m.g && pushed.f == m.f;
  r.attained_identity = pushed.g == r.attained_g && pushed.f == m.f;
  return r;
}

// Fuzzy matrices

std::string FuzzyMatrix::str() const {
  std::string fs;
  for (std::size_t i = 0; i < f.size(); ++i)
    fs += (i ? " " : "") + rational_str(Rational(static_cast<int>(i), chain - 1)) + "->" + rational_str(f[i]);
  return "fuzzy matrix over L" + std::to_string(chain) + " threshold " + rational_str(threshold) + " f " + fs +
         "\n";
}

FuzzyMatrix fuzzy_identity(int chain, const Rational& threshold) {
  if (chain < 2) throw InputError("chain needs at least 2 elements");
  FuzzyMatrix m;
  m.chain = chain;
  m.threshold = threshold;
  for (int i = 0; i < chain; ++i) m.f.push_back(Rational(i, chain - 1));
  return m;
}

Rational luk_tnorm(const Rational& x, const Rational& y) {
  Rational v = x + y - 1;
  return v < 0 ? Rational(0) : v;
}

Report validate(const FuzzyMatrix& m) {
  if (m.chain < 2) throw InputError("chain needs at least 2 elements");
  if (static_cast<int>(m.f.size()) != m.chain) throw InputError("f must be given on every chain element");
  if (m.threshold < 0 || m.threshold > 1) throw InputError("threshold outside [0,1]");
  for (const auto& v : m.f)
    if (v < 0 || v > 1) throw InputError("f value outside [0,1]");
  Report r;
  int d = m.chain - 1;
  for (int i = 0; i + 1 < m.chain; ++i)
    if (!(m.f[i] < m.f[i + 1]))
      r.add("strict monotonicity", "f(" + rational_str(Rational(i, d)) + ") >= f(" + rational_str(Rational(i + 1, d)) + ")");
  for (int i = 0; i < m.chain; ++i)
    for (int j = 0; j < m.chain; ++j) {
      int k = std::max(0, i + j - d);
      if (m.f[k] != luk_tnorm(m.f[i], m.f[j]))
        r.add("tensor preservation", "x=" + rational_str(Rational(i, d)) + " y=" + rational_str(Rational(j, d)));
    }
  return r;
}

namespace {

template <class Visit>
void scan_fuzzy(const FuzzyMatrix& m, const Consecution& c, Visit&& visit) {
  if (!validate(m).ok()) throw InputError("invalid fuzzy matrix: " + validate(m).str());
  FiniteAlgebra a = luk_chain(m.chain);
  std::set<std::string> vs = c.vars();
  Compiler comp(std::vector<std::string>(vs.begin(), vs.end()));
  std::vector<CompiledFormula> lhs, rhs;
  for (const auto& f : c.premises.expand()) lhs.push_back(comp.compile(f));
  for (const auto& f : c.conclusions.expand()) rhs.push_back(comp.compile(f));
  if (!comp.constants().empty()) throw InputError("fuzzy matrices do not interpret constants");
  std::vector<std::string> vars = comp.vars();
  for_each_valuation(static_cast<int>(vars.size()), a.size(), [&](const std::vector<int>& vals) {
    Rational fg = 1, fd = 1;
    for (const auto& f : lhs) fg = luk_tnorm(fg, m.f[evaluate(a, f, vals, {})]);
    for (const auto& f : rhs) fd = luk_tnorm(fd, m.f[evaluate(a, f, vals, {})]);
    std::string w;
    for (std::size_t i = 0; i < vars.size(); ++i)
      w += (i ? " " : "") + vars[i] + "=" + a.elements[vals[i]];
    return visit(fg, fd, w);
  });
}

}  // namespace

HyperVerdict fuzzy_check(const FuzzyMatrix& m, const Consecution& c) {
  // Values f(C) of contexts: the closure of {1} under multiplication by f(x).
  std::set<Rational> ctx{Rational(1)};
  std::vector<Rational> work{Rational(1)};
  while (!work.empty()) {
    Rational v = work.back();
    work.pop_back();
    for (const auto& fx : m.f) {
      Rational w = luk_tnorm(v, fx);
      if (ctx.insert(w).second) work.push_back(w);
    }
  }
  HyperVerdict out;
  scan_fuzzy(m, c, [&](const Rational& fg, const Rational& fd, const std::string& w) {
    for (const auto& v : ctx)
      if (luk_tnorm(v, fg) >= m.threshold && luk_tnorm(v, fd) < m.threshold) {
        out.holds = false;
        out.witness = w + (w.empty() ? "" : " ") + "context-value=" + rational_str(v);
        return false;
      }
    return true;
  });
  return out;
}

HyperVerdict fuzzy_family_check(const FuzzyMatrix& m, const Consecution& c) {
  HyperVerdict out;
  scan_fuzzy(m, c, [&](const Rational& fg, const Rational& fd, const std::string& w) {
    if (fd < fg) {
      out.holds = false;
      out.witness = w;
      return false;
    }
    return true;
  });
  return out;
}

bool fuzzy_consequence(const std::vector<FuzzyMatrix>& ms, const Consecution& c) {
  return std::all_of(ms.begin(), ms.end(), [&](const FuzzyMatrix& m) { return fuzzy_check(m, c).holds; });
}

}  // namespace mdrkit
