#include "mdrkit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdrkit/error.hpp"

namespace mdrkit {

std::string rational_str(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& s) {
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(p, q);
  } catch (const std::runtime_error&) {
    throw InputError("malformed rational '" + s + "'");
  }
}

bool FiniteAlgebra::has_op(Op op) const {
  switch (op) {
    case Op::Meet: return !meet.empty();
    case Op::Join: return !join.empty();
    case Op::Fuse: return !fuse.empty();
    case Op::Impl: return !impl.empty();
    case Op::One: return one >= 0;
    default: return true;
  }
}

int FiniteAlgebra::apply(Op op, int a, int b) const {
  const std::vector<int>* t = nullptr;
  switch (op) {
    case Op::Meet: t = &meet; break;
    case Op::Join: t = &join; break;
    case Op::Fuse: t = &fuse; break;
    case Op::Impl: t = &impl; break;
    default: throw InputError("not a binary operation");
  }
  if (t->empty()) throw InputError("algebra " + name + " lacks an operation used by the formula");
  return (*t)[a * size() + b];
}

int FiniteAlgebra::constant(const std::string& c) const {
  for (const auto& [k, v] : constants)
    if (k == c) return v;
  throw InputError("algebra " + name + " has no constant #" + c);
}

int FiniteAlgebra::index(const std::string& element) const {
  for (int i = 0; i < size(); ++i)
    if (elements[i] == element) return i;
  throw InputError("unknown element '" + element + "' in algebra " + name);
}

void FiniteAlgebra::check_shape() const {
  int n = size();
  if (n == 0) throw InputError("algebra " + name + " has no elements");
  for (const auto* t : {&meet, &join, &fuse, &impl}) {
    if (t->empty()) continue;
    if (static_cast<int>(t->size()) != n * n) throw InputError("operation table of " + name + " is not total");
    for (int v : *t)
      if (v < 0 || v >= n) throw InputError("operation table of " + name + " leaves the carrier");
  }
  if (one >= n) throw InputError("unit of " + name + " is out of range");
  for (const auto& [k, v] : constants)
    if (v < 0 || v >= n) throw InputError("constant #" + k + " of " + name + " is out of range");
}

bool FiniteAlgebra::is_rl_signature() const {
  return !meet.empty() && !join.empty() && !fuse.empty() && !impl.empty() && one >= 0;
}

void Compiler::emit(const Formula& f, CompiledFormula& out) {
  switch (f.op()) {
    case Op::Var: {
      auto it = std::find(vars_.begin(), vars_.end(), f.name());
      if (it == vars_.end()) {
        vars_.push_back(f.name());
        it = vars_.end() - 1;
      }
      out.code.push_back({Op::Var, static_cast<int>(it - vars_.begin())});
      return;
    }
    case Op::Const: {
      auto it = std::find(constants_.begin(), constants_.end(), f.name());
      if (it == constants_.end()) {
        constants_.push_back(f.name());
        it = constants_.end() - 1;
      }
      out.code.push_back({Op::Const, static_cast<int>(it - constants_.begin())});
      return;
    }
    case Op::One: out.code.push_back({Op::One, 0}); return;
    default:
      emit(f.left(), out);
      emit(f.right(), out);
      out.code.push_back({f.op(), 0});
  }
}

CompiledFormula Compiler::compile(const Formula& f) {
  CompiledFormula out;
  emit(f, out);
  return out;
}

int evaluate(const FiniteAlgebra& a, const CompiledFormula& f, const std::vector<int>& vals,
             const std::vector<int>& consts) {
  int stack[256] = {};
  std::vector<int> big;
  int* st = stack;
  if (f.code.size() > 256) {
    big.resize(f.code.size());
    st = big.data();
  }
  int sp = 0;
  for (const auto& ins : f.code) {
    switch (ins.op) {
      case Op::Var: st[sp++] = vals[ins.arg]; break;
      case Op::Const: st[sp++] = consts[ins.arg]; break;
      case Op::One:
        if (a.one < 0) throw InputError("algebra " + a.name + " has no unit");
        st[sp++] = a.one;
        break;
      default: {
        int r = st[--sp];
        int l = st[--sp];
        st[sp++] = a.apply(ins.op, l, r);
      }
    }
  }
  return st[0];
}

int evaluate(const FiniteAlgebra& a, const Formula& f, const std::map<std::string, int>& val) {
  switch (f.op()) {
    case Op::Var: {
      auto it = val.find(f.name());
      if (it == val.end()) throw InputError("unassigned variable " + f.name());
      return it->second;
    }
    case Op::Const: return a.constant(f.name());
    case Op::One:
      if (a.one < 0) throw InputError("algebra " + a.name + " has no unit");
      return a.one;
    default: return a.apply(f.op(), evaluate(a, f.left(), val), evaluate(a, f.right(), val));
  }
}

Report validate_rl(const FiniteAlgebra& a) {
  a.check_shape();
  Report r;
  if (!a.is_rl_signature()) {
    r.add("signature", "missing &, |, *, -> or 1");
    return r;
  }
  int n = a.size();
  auto M = [&](int x, int y) { return a.apply(Op::Meet, x, y); };
  auto J = [&](int x, int y) { return a.apply(Op::Join, x, y); };
  auto F = [&](int x, int y) { return a.apply(Op::Fuse, x, y); };
  auto I = [&](int x, int y) { return a.apply(Op::Impl, x, y); };
  auto w = [&](std::initializer_list<int> xs) {
    std::string out = "(";
    bool first = true;
    for (int x : xs) {
      out += (first ? "" : ",") + a.elements[x];
      first = false;
    }
    return out + ")";
  };
  for (int x = 0; x < n; ++x) {
    if (M(x, x) != x || J(x, x) != x) r.add("idempotence", w({x}));
    if (F(x, a.one) != x) r.add("fusion unit", w({x}));
    if (!a.leq(x, a.one)) r.add("integrality", w({x}));
    for (int y = 0; y < n; ++y) {
      if (M(x, y) != M(y, x) || J(x, y) != J(y, x)) r.add("lattice commutativity", w({x, y}));
      if (M(x, J(x, y)) != x || J(x, M(x, y)) != x) r.add("absorption", w({x, y}));
      if (F(x, y) != F(y, x)) r.add("fusion commutativity", w({x, y}));
      for (int z = 0; z < n; ++z) {
        if (M(M(x, y), z) != M(x, M(y, z)) || J(J(x, y), z) != J(x, J(y, z)))
          r.add("lattice associativity", w({x, y, z}));
        if (F(F(x, y), z) != F(x, F(y, z))) r.add("fusion associativity", w({x, y, z}));
        if (a.leq(F(x, y), z) != a.leq(x, I(y, z))) r.add("residuation", w({x, y, z}));
      }
    }
  }
  return r;
}

namespace {

std::string frac_name(int k, int d) {
  if (k == 0) return "0";
  if (k == d) return "1";
  int g = std::gcd(k, d);
  return std::to_string(k / g) + "/" + std::to_string(d / g);
}

FiniteAlgebra chain_algebra(const std::string& name, int n, bool lukasiewicz) {
  if (n < 2) throw InputError("chains need at least two elements");
  FiniteAlgebra a;
  a.name = name;
  int d = n - 1;
  for (int k = 0; k < n; ++k) a.elements.push_back(frac_name(k, d));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      a.meet.push_back(std::min(x, y));
      a.join.push_back(std::max(x, y));
      if (lukasiewicz) {
        a.fuse.push_back(std::max(0, x + y - d));
        a.impl.push_back(std::min(d, d - x + y));
      } else {
        a.fuse.push_back(std::min(x, y));
        a.impl.push_back(x <= y ? d : y);
      }
    }
  a.one = d;
  return a;
}

}  // namespace

FiniteAlgebra luk_chain(int n) { return chain_algebra("L" + std::to_string(n), n, true); }

FiniteAlgebra godel_chain(int n) { return chain_algebra("G" + std::to_string(n), n, false); }

FiniteAlgebra constants_algebra() {
  FiniteAlgebra a;
  a.name = "B01";
  a.elements = {"0", "1"};
  a.constants = {{"0", 0}, {"1", 1}};
  return a;
}

bool rl_consequence(const std::vector<FiniteAlgebra>& algebras, const Consecution& c) {
  std::set<std::string> vs = c.vars();
  std::vector<std::string> vars(vs.begin(), vs.end());
  for (const auto& a : algebras) {
    Report r = validate_rl(a);
    if (!r.ok()) throw InputError("algebra " + a.name + " is not a commutative integral residuated lattice");
    double space = std::pow(static_cast<double>(a.size()), static_cast<double>(vars.size()));
    if (space > 5e7) throw SizeGuardError("valuation space too large for exhaustive scan");
    Compiler comp(vars);
    std::vector<CompiledFormula> gam, del;
    for (const auto& f : c.premises.expand()) gam.push_back(comp.compile(f));
    for (const auto& f : c.conclusions.expand()) del.push_back(comp.compile(f));
    std::vector<int> consts;
    for (const auto& k : comp.constants()) consts.push_back(a.constant(k));
    bool ok = for_each_valuation(static_cast<int>(vars.size()), a.size(), [&](const std::vector<int>& v) {
      int lhs = a.one, rhs = a.one;
      for (const auto& g : gam) lhs = a.apply(Op::Fuse, lhs, evaluate(a, g, v, consts));
      for (const auto& d : del) rhs = a.apply(Op::Fuse, rhs, evaluate(a, d, v, consts));
      return a.leq(lhs, rhs);
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace mdrkit
