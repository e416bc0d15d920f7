#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdrkit/multiset.hpp"

namespace mdrkit {

enum class Op { Var, One, Const, Meet, Join, Fuse, Impl };

// Immutable term over the connectives &, |, *, ->, the constant 1, variables
// and named algebra constants (written #name).
class Formula {
 public:
  Formula();  // the constant 1

  static Formula var(const std::string& name);
  static Formula one();
  static Formula constant(const std::string& name);
  static Formula binary(Op op, const Formula& l, const Formula& r);
  static Formula meet(const Formula& l, const Formula& r) { return binary(Op::Meet, l, r); }
  static Formula join(const Formula& l, const Formula& r) { return binary(Op::Join, l, r); }
  static Formula fuse(const Formula& l, const Formula& r) { return binary(Op::Fuse, l, r); }
  static Formula impl(const Formula& l, const Formula& r) { return binary(Op::Impl, l, r); }

  Op op() const { return node_->op; }
  bool is_var() const { return node_->op == Op::Var; }
  bool is_binary() const { return node_->left != nullptr; }
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  std::string str() const;
  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  void collect_subformulas(std::set<Formula>& out) const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  // Total order: by size, then structurally.
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Node> left, right;
    std::size_t hash, size, depth;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static int compare(const Node* a, const Node* b);

  std::shared_ptr<const Node> node_;
};

using FMultiset = Multiset<Formula>;

Formula parse_formula(const std::string& src);
FMultiset parse_fmultiset(const std::string& src);
std::string to_string(const FMultiset& m);
std::set<std::string> vars_of(const FMultiset& m);

// Endomorphism of the formula algebra: a finite table plus a default for
// every other variable (either the identity or a fixed term).
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::vector<std::pair<std::string, Formula>> table,
               std::optional<Formula> fallback = std::nullopt);

  static Substitution identity() { return Substitution(); }
  static Substitution constant(const Formula& t) { return Substitution({}, t); }
  static Substitution single(const std::string& v, const Formula& t) {
    return Substitution({{v, t}});
  }

  Formula image(const std::string& var) const;
  Formula operator()(const Formula& f) const;
  FMultiset operator()(const FMultiset& m) const;

  const std::vector<std::pair<std::string, Formula>>& table() const { return table_; }
  const std::optional<Formula>& fallback() const { return fallback_; }
  bool is_identity() const { return table_.empty() && !fallback_; }

  std::string str() const;

  friend bool operator==(const Substitution& a, const Substitution& b);
  friend bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }
  friend bool operator<(const Substitution& a, const Substitution& b);

 private:
  std::vector<std::pair<std::string, Formula>> table_;  // sorted, canonical
  std::optional<Formula> fallback_;
};

// (s ∘ p)(φ) = s(p(φ)).
Substitution compose(const Substitution& s, const Substitution& p);
Substitution parse_substitution(const std::string& src);

using SubstMultiset = Multiset<Substitution>;

FMultiset apply_subst(const Substitution& s, const FMultiset& g);
SubstMultiset subst_product(const SubstMultiset& x, const SubstMultiset& y);
FMultiset sigma_action(const SubstMultiset& x, const FMultiset& g);
std::string to_string(const SubstMultiset& m);

struct Consecution {
  FMultiset premises;
  FMultiset conclusions;

  std::string str() const;
  std::set<std::string> vars() const;
  friend bool operator==(const Consecution& a, const Consecution& b) {
    return a.premises == b.premises && a.conclusions == b.conclusions;
  }
  friend bool operator<(const Consecution& a, const Consecution& b) {
    if (a.premises != b.premises) return a.premises < b.premises;
    return a.conclusions < b.conclusions;
  }
};

Consecution parse_consecution(const std::string& src);

}  // namespace mdrkit
