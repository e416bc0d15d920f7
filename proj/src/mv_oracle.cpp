#include "mdrkit/mv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "mdrkit/error.hpp"

namespace mdrkit {

namespace {

struct Program {
  std::vector<std::string> vars;
  std::vector<CompiledFormula> lhs, rhs;
};

Program compile(const Consecution& c) {
  std::set<std::string> vs = c.vars();
  Compiler comp(std::vector<std::string>(vs.begin(), vs.end()));
  Program p;
  for (const auto& f : c.premises.expand()) p.lhs.push_back(comp.compile(f));
  for (const auto& f : c.conclusions.expand()) p.rhs.push_back(comp.compile(f));
  if (!comp.constants().empty()) throw InputError("the MV oracle does not interpret constant #" + comp.constants()[0]);
  p.vars = comp.vars();
  return p;
}

// Values are numerators over the common denominator d.
template <class T>
T eval_grid(const CompiledFormula& f, const std::vector<T>& vals, const T& d, std::vector<T>& st) {
  st.clear();
  for (const auto& ins : f.code) {
    switch (ins.op) {
      case Op::Var: st.push_back(vals[ins.arg]); break;
      case Op::One: st.push_back(d); break;
      default: {
        T r = st.back();
        st.pop_back();
        T l = st.back();
        st.pop_back();
        T v;
        switch (ins.op) {
          case Op::Meet: v = l < r ? l : r; break;
          case Op::Join: v = l < r ? r : l; break;
          case Op::Fuse: v = l + r - d; if (v < 0) v = 0; break;
          case Op::Impl: v = d - l + r; if (v > d) v = d; break;
          default: throw InputError("unsupported connective");
        }
        st.push_back(v);
      }
    }
  }
  return st.back();
}

template <class T>
bool holds(const Program& p, const std::vector<T>& vals, const T& d, std::vector<T>& st) {
  T lhs = d, rhs = d;
  for (const auto& f : p.lhs) {
    lhs = lhs + eval_grid(f, vals, d, st) - d;
    if (lhs < 0) lhs = 0;
  }
  for (const auto& f : p.rhs) {
    rhs = rhs + eval_grid(f, vals, d, st) - d;
    if (rhs < 0) rhs = 0;
  }
  return !(rhs < lhs);
}

// First refuting valuation index in [lo, hi), or hi.
std::uint64_t scan_range(const Program& p, std::int64_t d, std::uint64_t lo, std::uint64_t hi) {
  std::size_t k = p.vars.size();
  std::vector<std::int64_t> vals(k), st;
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = k; i-- > 0;) {
      vals[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(d + 1));
      rest /= static_cast<std::uint64_t>(d + 1);
    }
    if (!holds<std::int64_t>(p, vals, d, st)) return idx;
  }
  return hi;
}

}  // namespace

std::string OracleVerdict::label() const {
  return valid ? "Valid\xE2\x89\xA4" + std::to_string(max_chain) : "Invalid";
}

std::string OracleVerdict::witness_str() const {
  std::string out;
  for (const auto& [v, q] : witness) out += (out.empty() ? "" : " ") + v + "=" + rational_str(q);
  return out;
}

OracleVerdict mv_oracle(const Consecution& c, const OracleOptions& opt) {
  if (opt.max_chain < 2) throw InputError("max chain must be at least 2");
  Program p = compile(c);
  std::size_t k = p.vars.size();
  OracleVerdict out;
  out.max_chain = opt.max_chain;
  int jobs = std::max(1, opt.jobs);
  for (int n = 2; n <= opt.max_chain; ++n) {
    std::int64_t d = n - 1;
    double space = std::pow(static_cast<double>(n), static_cast<double>(k));
    if (space > 2e8) throw SizeGuardError("chain scan of " + std::to_string(k) + " variables is too large");
    std::uint64_t total = static_cast<std::uint64_t>(space + 0.5);
    std::uint64_t found = total;
    if (jobs == 1 || total < 4096) {
      found = scan_range(p, d, 0, total);
    } else {
      std::vector<std::uint64_t> first(jobs, total);
      std::vector<std::thread> pool;
      std::uint64_t chunk = (total + jobs - 1) / jobs;
      for (int j = 0; j < jobs; ++j) {
        std::uint64_t lo = std::min(total, chunk * j), hi = std::min(total, lo + chunk);
        pool.emplace_back([&, j, lo, hi] {
          std::uint64_t r = scan_range(p, d, lo, hi);
          first[j] = r == hi ? total : r;
        });
      }
      for (auto& t : pool) t.join();
      found = *std::min_element(first.begin(), first.end());
    }
    if (found < total) {
      out.valid = false;
      out.chain = n;
      std::uint64_t rest = found;
      std::vector<std::int64_t> vals(k);
      for (std::size_t i = k; i-- > 0;) {
        vals[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(n));
        rest /= static_cast<std::uint64_t>(n);
      }
      for (std::size_t i = 0; i < k; ++i) out.witness.emplace_back(p.vars[i], Rational(vals[i], d));
      return out;
    }
  }
  if (k == 0) return out;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> den(1, std::max(1, opt.max_denominator));
  std::vector<Rational> vals(k), st;
  Rational one(1);
  for (int s = 0; s < opt.samples; ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      int q = den(rng);
      std::uniform_int_distribution<int> num(0, q);
      vals[i] = Rational(num(rng), q);
    }
    if (!holds<Rational>(p, vals, one, st)) {
      out.valid = false;
      for (std::size_t i = 0; i < k; ++i) out.witness.emplace_back(p.vars[i], vals[i]);
      return out;
    }
  }
  return out;
}

bool mv_holds_at(const Consecution& c, const std::vector<std::pair<std::string, Rational>>& val) {
  Program p = compile(c);
  std::vector<Rational> vals;
  for (const auto& v : p.vars) {
    auto it = std::find_if(val.begin(), val.end(), [&](const auto& e) { return e.first == v; });
    if (it == val.end()) throw InputError("valuation misses variable " + v);
    if (it->second < 0 || it->second > 1) throw InputError("valuation leaves [0,1]");
    vals.push_back(it->second);
  }
  std::vector<Rational> st;
  return holds<Rational>(p, vals, Rational(1), st);
}

}  // namespace mdrkit
