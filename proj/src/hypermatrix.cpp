#include <algorithm>
#include <cmath>

#include "mdrkit/error.hpp"
#include "mdrkit/semantics.hpp"

namespace mdrkit {

bool bag_leq(const Bag& a, const Bag& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Bag bag_sum(const Bag& a, const Bag& b) {
  Bag out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Bag bag_diff(const Bag& a, const Bag& b) {
  Bag out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(0, a[i] - b[i]);
  return out;
}

int bag_size(const Bag& a) {
  int s = 0;
  for (int x : a) s += x;
  return s;
}

Bag bag_of(int n, const std::vector<int>& elems) {
  Bag out(n, 0);
  for (int e : elems) {
    if (e < 0 || e >= n) throw InputError("bag element out of range");
    ++out[e];
  }
  return out;
}

std::string bag_str(const Bag& b, const std::vector<std::string>& names) {
  std::string out = "[";
  bool first = true;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int k = 0; k < b[i]; ++k) {
      if (!first) out += ",";
      out += names[i];
      first = false;
    }
  return out + "]";
}

bool for_each_subbag(const Bag& b, const std::function<bool(const Bag&)>& visit) {
  Bag cur(b.size(), 0);
  while (true) {
    if (!visit(cur)) return false;
    std::size_t i = 0;
    while (i < b.size() && cur[i] == b[i]) cur[i++] = 0;
    if (i == b.size()) return true;
    ++cur[i];
  }
}

bool Downset::contains(const Bag& b) const {
  for (const auto& g : gens)
    if (bag_leq(b, g)) return true;
  return false;
}

std::set<Bag> Downset::members() const {
  std::set<Bag> out;
  for (const auto& g : gens)
    for_each_subbag(g, [&](const Bag& s) {
      out.insert(s);
      return true;
    });
  return out;
}

std::string Downset::str(const std::vector<std::string>& names) const {
  std::string out;
  for (const auto& g : gens) out += (out.empty() ? "" : " ") + bag_str(g, names);
  return out.empty() ? "(empty)" : out;
}

Downset make_downset(int n, std::vector<Bag> gens) {
  for (const auto& g : gens)
    if (static_cast<int>(g.size()) != n) throw InputError("bag of the wrong width");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  Downset d;
  d.n = n;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < gens.size() && !dominated; ++j)
      dominated = j != i && bag_leq(gens[i], gens[j]);
    if (!dominated) d.gens.push_back(gens[i]);
  }
  return d;
}

Downset parse_downset_gens(const FiniteAlgebra& a, const std::vector<std::string>& literals) {
  std::vector<Bag> gens;
  for (const auto& lit : literals) {
    std::vector<int> elems;
    for (const auto& item : split_multiset_literal(lit)) elems.push_back(a.index(item));
    gens.push_back(bag_of(a.size(), elems));
  }
  return make_downset(a.size(), gens);
}

std::string Hypermatrix::str() const {
  return "hypermatrix over " + algebra.name + " filter " + filter.str(algebra.elements) + "\n";
}

Report validate(const Hypermatrix& h) {
  h.algebra.check_shape();
  Report r;
  if (h.filter.n != h.algebra.size()) r.add("filter width", std::to_string(h.filter.n));
  for (std::size_t i = 0; i < h.filter.gens.size(); ++i)
    for (std::size_t j = 0; j < h.filter.gens.size(); ++j)
      if (i != j && bag_leq(h.filter.gens[i], h.filter.gens[j]))
        r.add("antichain", bag_str(h.filter.gens[i], h.algebra.elements));
  return r;
}

namespace {

struct CompiledConsecution {
  std::vector<std::string> vars;
  std::vector<CompiledFormula> lhs, rhs;
  std::vector<int> consts;
};

CompiledConsecution compile_for(const FiniteAlgebra& a, const Consecution& c) {
  std::set<std::string> vs = c.vars();
  Compiler comp(std::vector<std::string>(vs.begin(), vs.end()));
  CompiledConsecution out;
  for (const auto& f : c.premises.expand()) out.lhs.push_back(comp.compile(f));
  for (const auto& f : c.conclusions.expand()) out.rhs.push_back(comp.compile(f));
  out.vars = comp.vars();
  for (const auto& k : comp.constants()) out.consts.push_back(a.constant(k));
  return out;
}

Bag eval_bag(const FiniteAlgebra& a, const CompiledConsecution& cc, const std::vector<CompiledFormula>& fs,
             const std::vector<int>& vals) {
  Bag out(a.size(), 0);
  for (const auto& f : fs) ++out[evaluate(a, f, vals, cc.consts)];
  return out;
}

std::string valuation_str(const FiniteAlgebra& a, const std::vector<std::string>& vars,
                          const std::vector<int>& vals) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i)
    out += (out.empty() ? "" : " ") + vars[i] + "=" + a.elements[vals[i]];
  return out;
}

void guard_space(int n, std::size_t k, std::uint64_t guard) {
  double space = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (space > static_cast<double>(guard))
    throw SizeGuardError("valuation space " + std::to_string(n) + "^" + std::to_string(k) + " exceeds guard");
}

}  // namespace

HyperVerdict hyper_check(const Hypermatrix& h, const Consecution& c, HyperMode mode,
                         std::uint64_t guard) {
  const FiniteAlgebra& a = h.algebra;
  CompiledConsecution cc = compile_for(a, c);
  guard_space(a.size(), cc.vars.size(), guard);
  HyperVerdict v;
  for_each_valuation(static_cast<int>(cc.vars.size()), a.size(), [&](const std::vector<int>& vals) {
    Bag eg = eval_bag(a, cc, cc.lhs, vals);
    Bag ed = eval_bag(a, cc, cc.rhs, vals);
    if (mode == HyperMode::Plain) {
      if (h.filter.contains(eg) && !h.filter.contains(ed)) {
        v.holds = false;
        v.witness = valuation_str(a, cc.vars, vals);
      }
      return v.holds;
    }
    // The largest admissible context below a generator decides all smaller ones.
    for (const auto& g : h.filter.gens) {
      if (!bag_leq(eg, g)) continue;
      Bag ctx = bag_diff(g, eg);
      if (!h.filter.contains(bag_sum(ctx, ed))) {
        v.holds = false;
        std::string val = valuation_str(a, cc.vars, vals);
        v.witness = val + (val.empty() ? "" : " ") + "context=" + bag_str(ctx, a.elements);
        return false;
      }
    }
    return true;
  });
  return v;
}

bool hyper_consequence(const Hypermatrix& h, const Consecution& c, HyperMode mode) {
  return hyper_check(h, c, mode).holds;
}

FilterResult filter_generate(const AxiomaticSystem& as, const FiniteAlgebra& a,
                             const std::vector<Bag>& seed, const FilterOptions& opt) {
  int n = a.size();
  std::set<std::pair<Bag, Bag>> instances;
  for (const auto& s : as.schemata) {
    CompiledConsecution cc = compile_for(a, s.body);
    guard_space(n, cc.vars.size(), 1000000);
    for_each_valuation(static_cast<int>(cc.vars.size()), n, [&](const std::vector<int>& vals) {
      instances.emplace(eval_bag(a, cc, cc.lhs, vals), eval_bag(a, cc, cc.rhs, vals));
      return true;
    });
  }
  FilterResult res;
  res.filter = make_downset(n, seed);
  for (const auto& g : res.filter.gens)
    if (bag_size(g) > opt.max_size) res.truncated = true;
  while (true) {
    if (res.iterations >= opt.max_iterations) {
      res.truncated = true;
      break;
    }
    ++res.iterations;
    std::vector<Bag> added;
    for (const auto& g : res.filter.gens)
      for (const auto& [eg, ed] : instances) {
        if (!bag_leq(eg, g)) continue;
        Bag cand = bag_sum(bag_diff(g, eg), ed);
        if (res.filter.contains(cand)) continue;
        if (bag_size(cand) > opt.max_size) {
          res.truncated = true;
          continue;
        }
        added.push_back(std::move(cand));
      }
    if (added.empty()) break;
    std::vector<Bag> all = res.filter.gens;
    all.insert(all.end(), added.begin(), added.end());
    res.filter = make_downset(n, std::move(all));
  }
  if (!res.truncated) {
    Hypermatrix h{a, res.filter};
    for (const auto& s : as.schemata) {
      HyperVerdict v = hyper_check(h, s.body, HyperMode::Contextual);
      if (!v.holds) res.verification.add("closed under " + s.name, v.witness);
    }
    if (!res.verification.ok()) throw InternalError("generated filter is not closed: " + res.verification.str());
  }
  return res;
}

}  // namespace mdrkit
