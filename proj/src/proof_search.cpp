#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "mdrkit/error.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/text.hpp"

namespace mdrkit {

std::string Derivation::str() const {
  std::string out;
  for (const auto& s : steps) {
    out += "step: " + to_string(s.multiset) + "\n";
    if (!s.rule.empty())
      out += "  by: " + s.rule + " subst: " + s.subst.str() + " at: " + to_string(s.matched) + "\n";
  }
  return out;
}

Derivation parse_derivation(const std::string& src) {
  Derivation d;
  auto lines = split_lines(src);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = trim_copy(strip_comment(lines[ln]));
    if (line.empty()) continue;
    std::string where = "line " + std::to_string(ln + 1) + ": ";
    try {
      if (starts_with(line, "step:")) {
        Step s;
        s.multiset = parse_fmultiset(line.substr(5));
        d.steps.push_back(std::move(s));
      } else if (starts_with(line, "by:")) {
        if (d.steps.empty()) throw InputError("justification before any step");
        Step& s = d.steps.back();
        if (!s.rule.empty()) throw InputError("step justified twice");
        std::size_t ps = line.find(" subst:"), pa = line.find(" at:");
        if (ps == std::string::npos || pa == std::string::npos || pa < ps)
          throw InputError("expected 'by: RULE subst: {...} at: [...]'");
        s.rule = trim_copy(line.substr(3, ps - 3));
        if (s.rule.empty()) throw InputError("missing rule name");
        s.subst = parse_substitution(trim_copy(line.substr(ps + 7, pa - ps - 7)));
        s.matched = parse_fmultiset(line.substr(pa + 4));
      } else {
        throw InputError("expected 'step:' or 'by:'");
      }
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return d;
}

std::string Verdict::str() const {
  if (ok) return "accepted\n";
  if (bad_step > 0) return "rejected at step " + std::to_string(bad_step) + ": " + reason + "\n";
  return "rejected: " + reason + "\n";
}

Verdict check_derivation(const AxiomaticSystem& as, const Derivation& d, const Consecution& claim) {
  auto reject = [](int step, std::string why) {
    Verdict v;
    v.ok = false;
    v.bad_step = step;
    v.reason = std::move(why);
    return v;
  };
  if (d.steps.empty()) return reject(0, "empty derivation");
  if (!d.steps[0].rule.empty()) return reject(1, "the first step carries a justification");
  if (d.steps[0].multiset != claim.premises)
    return reject(1, "first multiset " + to_string(d.steps[0].multiset) + " differs from premises " +
                         to_string(claim.premises));
  for (std::size_t j = 1; j < d.steps.size(); ++j) {
    const Step& prev = d.steps[j - 1];
    const Step& s = d.steps[j];
    int idx = static_cast<int>(j) + 1;
    if (s.rule.empty()) return reject(idx, "missing justification");
    const Schema* schema = as.find(s.rule);
    if (!schema) return reject(idx, "unknown rule " + s.rule);
    FMultiset psi = s.subst(schema->body.premises);
    if (psi != s.matched)
      return reject(idx, "matched " + to_string(s.matched) + " is not the instance " + to_string(psi));
    if (!submultiset(psi, prev.multiset))
      return reject(idx, to_string(psi) + " is not contained in " + to_string(prev.multiset));
    FMultiset expect = difference(prev.multiset, psi) + s.subst(schema->body.conclusions);
    if (expect != s.multiset)
      return reject(idx, "expected " + to_string(expect) + ", got " + to_string(s.multiset));
  }
  if (!submultiset(claim.conclusions, d.steps.back().multiset))
    return reject(0, "conclusions " + to_string(claim.conclusions) + " not contained in the last multiset");
  return Verdict{};
}

std::string SearchResult::status_str() const {
  switch (status) {
    case Status::Found: return "found";
    case Status::DepthExhausted: return "depth-exhausted";
    case Status::BudgetExhausted: return "budget-exhausted";
  }
  return "";
}

namespace {

struct Move {
  Step step;
  std::string key;
};

class Searcher {
 public:
  Searcher(const AxiomaticSystem& as, const Consecution& claim, const SearchOptions& opt)
      : as_(as), claim_(claim), opt_(opt) {
    for (const auto& [f, n] : claim.premises.entries()) f.collect_subformulas(sub_);
    for (const auto& [f, n] : claim.conclusions.entries()) f.collect_subformulas(sub_);
  }

  SearchResult run() {
    SearchResult res;
    for (int depth = 1; depth <= opt_.max_depth; ++depth) {
      path_.clear();
      Step first;
      first.multiset = claim_.premises;
      path_.push_back(first);
      if (dfs(depth - 1)) {
        res.status = SearchResult::Status::Found;
        res.derivation.steps = path_;
        res.nodes = nodes_;
        return res;
      }
      if (out_of_budget_) {
        res.status = SearchResult::Status::BudgetExhausted;
        res.nodes = nodes_;
        return res;
      }
    }
    res.nodes = nodes_;
    return res;
  }

 private:
  bool dfs(int remaining) {
    const FMultiset& cur = path_.back().multiset;
    if (submultiset(claim_.conclusions, cur)) return true;
    if (remaining == 0) return false;
    if (++nodes_ > opt_.max_nodes) {
      out_of_budget_ = true;
      return false;
    }
    std::string key = to_string(cur);
    auto it = failed_.find(key);
    if (it != failed_.end() && it->second >= remaining) return false;
    for (auto& m : moves(cur)) {
      path_.push_back(std::move(m.step));
      if (dfs(remaining - 1)) return true;
      path_.pop_back();
      if (out_of_budget_) return false;
    }
    int& best = failed_[key];
    best = std::max(best, remaining);
    return false;
  }

  std::vector<Move> moves(const FMultiset& cur) {
    std::vector<Move> out;
    std::unordered_set<std::string> seen;
    auto add = [&](const Schema& s, const Substitution& sigma) {
      Step st;
      st.rule = s.name;
      st.subst = sigma;
      st.matched = sigma(s.body.premises);
      st.multiset = difference(cur, st.matched) + sigma(s.body.conclusions);
      std::string key = to_string(st.multiset);
      if (st.multiset == cur || !seen.insert(key).second) return;
      out.push_back({std::move(st), std::move(key)});
    };
    for (const auto& s : as_.schemata) {
      if (s.is_axiom()) continue;
      match_multiset(s.body.premises, cur, false, Substitution(), [&](const Substitution& sigma) {
        add(s, sigma);
        return true;
      });
    }
    std::set<Formula> targets = sub_;
    for (const auto& [a, n] : cur.entries())
      for (const auto& c : sub_) {
        targets.insert(Formula::impl(a, c));
        for (const auto& [b, k] : cur.entries()) targets.insert(Formula::impl(a, Formula::impl(b, c)));
      }
    for (const auto& s : as_.schemata) {
      if (!s.is_axiom() || s.body.conclusions.distinct() != 1) continue;
      const Formula& phi = s.body.conclusions.entries()[0].first;
      for (const auto& t : targets)
        if (auto sigma = match_formula(phi, t)) add(s, *sigma);
    }
    return out;
  }

  const AxiomaticSystem& as_;
  const Consecution& claim_;
  SearchOptions opt_;
  std::set<Formula> sub_;
  std::vector<Step> path_;
  std::unordered_map<std::string, int> failed_;
  std::uint64_t nodes_ = 0;
  bool out_of_budget_ = false;
};

}  // namespace

SearchResult search_derivation(const AxiomaticSystem& as, const Consecution& claim,
                               const SearchOptions& opt) {
  if (opt.max_depth < 1) throw InputError("search depth must be at least 1");
  return Searcher(as, claim, opt).run();
}

}  // namespace mdrkit
