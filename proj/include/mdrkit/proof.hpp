#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdrkit/formula.hpp"

namespace mdrkit {

struct Schema {
  std::string name;
  Consecution body;

  bool is_axiom() const { return body.premises.empty(); }
  std::string str() const;  // "rule MP: [p, p->q] |> [q]"
};

struct AxiomaticSystem {
  std::vector<Schema> schemata;

  bool single_conclusion() const;
  const Schema* find(const std::string& name) const;
  std::string str() const;
};

// Lines `axiom: [] |> [phi]` or `rule: [G] |> [D]`, optionally named as
// `rule MP: ...`; `#` starts a comment.
AxiomaticSystem load_system(const std::string& src);
// "MV_s" or "MV"; throws InputError otherwise.
AxiomaticSystem builtin_system(const std::string& name);
// Source text of the shipped MV_s schemata.
const std::string& mv_s_source();

// Calls visit(sigma) for every substitution extending `base` that maps the
// pattern onto `target` (exact) or onto a sub-multiset of it. Stops when visit
// returns false.
void match_multiset(const FMultiset& pattern, const FMultiset& target, bool exact,
                    const Substitution& base, const std::function<bool(const Substitution&)>& visit);
std::optional<Substitution> match_formula(const Formula& pattern, const Formula& target,
                                          const Substitution& base = {});
std::optional<Substitution> find_instance(const Schema& s, const FMultiset& premises,
                                          const FMultiset& conclusions);

struct Step {
  FMultiset multiset;
  std::string rule;  // empty for the first step
  Substitution subst;
  FMultiset matched;
};

struct Derivation {
  std::vector<Step> steps;

  std::size_t depth() const { return steps.size(); }
  std::string str() const;
};

Derivation parse_derivation(const std::string& src);

struct Verdict {
  bool ok = true;
  int bad_step = -1;  // 1-based, 0 for claim-level failures
  std::string reason;

  std::string str() const;
};

Verdict check_derivation(const AxiomaticSystem& as, const Derivation& d, const Consecution& claim);

struct TreeProof {
  enum class Kind { Hyp, Axiom, Rule };
  Formula label;
  Kind kind = Kind::Hyp;
  std::string rule;  // may be empty for axioms and rules: any schema fits
  std::vector<TreeProof> children;

  std::string str(int indent = 0) const;
  std::size_t node_count() const;
  FMultiset hypotheses() const;
};

TreeProof parse_tree_proof(const std::string& src);

// Throws InputError if `as` is not single-conclusion.
Verdict check_tree_proof(const AxiomaticSystem& as, const TreeProof& t, const FMultiset& premises,
                         const Formula& conclusion);

struct SearchOptions {
  int max_depth = 6;
  std::uint64_t max_nodes = 2000000;
};

struct SearchResult {
  enum class Status { Found, DepthExhausted, BudgetExhausted };
  Status status = Status::DepthExhausted;
  Derivation derivation;
  std::uint64_t nodes = 0;

  bool found() const { return status == Status::Found; }
  std::string status_str() const;
};

SearchResult search_derivation(const AxiomaticSystem& as, const Consecution& claim,
                               const SearchOptions& opt = {});

struct SplitResult {
  TreeProof tree;
  FMultiset tree_premises;  // Γ^φ
  Derivation rest;          // from Γ^r to Δ∖[φ]
  FMultiset rest_premises;  // Γ^r
  FMultiset rest_conclusions;
};

// Preconditions are checked; violations throw InputError.
SplitResult split_derivation(const AxiomaticSystem& as, const Derivation& d,
                             const Consecution& claim, const Formula& phi);
Derivation tree_to_derivation(const AxiomaticSystem& as, const TreeProof& t,
                              const FMultiset& premises);

// Finitary consequence on sets of formulas: X ⊩ ψ.
using Tcr = std::function<bool(const std::set<Formula>&, const Formula&)>;

bool mdr_from_tcr(const Tcr& tcr, const FMultiset& gamma, const FMultiset& delta);
bool identity_tcr(const std::set<Formula>& x, const Formula& psi);
// Two-valued consequence with & and * read as conjunction, | as disjunction,
// -> as material implication and 1 as true.
bool classical_tcr(const std::set<Formula>& x, const Formula& psi);

}  // namespace mdrkit
