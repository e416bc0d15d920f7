#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mdrkit/report.hpp"
#include "mdrkit/structures.hpp"

namespace mdrkit {

using BasePtr = std::shared_ptr<const FinitePomonoid>;

// rows[a] = {b : a ⊢ b}
struct DeductiveRelation {
  BasePtr base;
  std::vector<Mask> rows;

  bool entails(int a, int b) const { return has(rows[a], b); }
  std::string str() const;
  friend bool operator==(const DeductiveRelation& x, const DeductiveRelation& y) {
    return x.rows == y.rows;
  }
};

// image[a] = δ(a)
struct DeductiveOperator {
  BasePtr base;
  std::vector<Mask> image;

  std::string str() const;
  friend bool operator==(const DeductiveOperator& x, const DeductiveOperator& y) {
    return x.image == y.image;
  }
};

// Members kept sorted by mask value.
struct DeductiveSystem {
  BasePtr base;
  std::vector<Mask> members;

  std::string str() const;
  friend bool operator==(const DeductiveSystem& x, const DeductiveSystem& y) {
    return x.members == y.members;
  }
};

DeductiveRelation least_dr(BasePtr base);
DeductiveRelation full_dr(BasePtr base);
// Least DR containing the given pairs.
DeductiveRelation dr_closure(BasePtr base, std::vector<Mask> rows);

Report validate(const DeductiveRelation& d);
Report validate(const DeductiveOperator& d);
Report validate(const DeductiveSystem& d);

DeductiveOperator to_do(const DeductiveRelation& d);
DeductiveSystem to_ds(const DeductiveRelation& d);
DeductiveRelation to_dr(const DeductiveOperator& d);
DeductiveSystem to_ds(const DeductiveOperator& d);
DeductiveRelation to_dr(const DeductiveSystem& d);
DeductiveOperator to_do(const DeductiveSystem& d);

// Orders of the three isomorphic lattices: ⊆, pointwise ⊆, ⊇.
bool leq(const DeductiveRelation& x, const DeductiveRelation& y);
bool leq(const DeductiveOperator& x, const DeductiveOperator& y);
bool leq(const DeductiveSystem& x, const DeductiveSystem& y);

// Lexicographic on the flattened boolean matrix, false < true.
bool lex_less(const DeductiveRelation& x, const DeductiveRelation& y);

struct EnumOptions {
  std::size_t cap = 1000000;
  int max_carrier = 5;
};

template <class T>
struct Census {
  std::vector<T> items;
  bool truncated = false;
};

Census<DeductiveRelation> enumerate_drs(BasePtr base, const EnumOptions& opt = {});
// Exhaustive scans over all maps R→℘(R) and all families of subsets; |R| ≤ 4.
Census<DeductiveOperator> enumerate_dos_brute(BasePtr base);
Census<DeductiveSystem> enumerate_dss_brute(BasePtr base);

struct TheoryReport {
  std::vector<Mask> theories;   // all ⊢-upsets, sorted
  std::vector<Mask> principal;  // Th(a) per element
  Mask theorems = 0;
  FinitePomonoid th_pomonoid;   // principal theories, ⊆, +^⊢, Th(0)
  std::vector<int> th_map;      // a ↦ index of Th(a) in th_pomonoid
  Report checks;
};

TheoryReport theories(const DeductiveRelation& d);

DeductiveOperator do_meet(const std::vector<DeductiveOperator>& ds);

// Closure-based structures on ℘(A), indexed by subset bitmask.
struct FiniteAcr {
  std::vector<std::string> names;
  std::vector<Mask> closure;  // closure[X] = {a : X ⊢ a}
  int size() const { return static_cast<int>(names.size()); }
  bool entails(Mask x, int a) const { return has(closure[x], a); }
  friend bool operator==(const FiniteAcr& x, const FiniteAcr& y) { return x.closure == y.closure; }
};

struct ClosureOperator {
  std::vector<std::string> names;
  std::vector<Mask> table;
  friend bool operator==(const ClosureOperator& x, const ClosureOperator& y) { return x.table == y.table; }
};

struct ClosureSystem {
  std::vector<std::string> names;
  std::vector<Mask> members;  // sorted
  friend bool operator==(const ClosureSystem& x, const ClosureSystem& y) { return x.members == y.members; }
};

struct AcrRule {
  Mask premises;
  int conclusion;
};

FiniteAcr acr_from_rules(const std::vector<std::string>& names, const std::vector<AcrRule>& rules);
Report validate(const FiniteAcr& a);
Report validate(const ClosureOperator& c);
Report validate(const ClosureSystem& c);

ClosureOperator acr_to_clop(const FiniteAcr& a);
ClosureSystem acr_to_clos(const FiniteAcr& a);
FiniteAcr clop_to_acr(const ClosureOperator& c);
ClosureSystem clop_to_clos(const ClosureOperator& c);
FiniteAcr clos_to_acr(const ClosureSystem& c);
ClosureOperator clos_to_clop(const ClosureSystem& c);

FiniteAcr bj_companion(const DeductiveRelation& d);
ClosureOperator bj_companion(const DeductiveOperator& d);
ClosureSystem bj_companion(const DeductiveSystem& d);

Report bj_diagram_check(BasePtr base);

// X ⊢′ Y iff X ⊢ a for all a ∈ Y, on the powerset pomonoid of A.
DeductiveRelation dr_from_acr(const FiniteAcr& a);

struct Check {
  bool ok = true;
  std::string witness;
};

Check action_invariant_check(const FiniteModule& m, const DeductiveOperator& d);

struct QuotientModule {
  FiniteModule module;
  std::vector<int> morphism;  // a ↦ index of δ(a)
  std::vector<Mask> classes;  // carrier of the quotient, as δ-images
  Report report;
};

QuotientModule quotient_module(const FiniteModule& m, const DeductiveOperator& d);

struct ModuleMorphism {
  const FiniteModule* from = nullptr;
  const FiniteModule* to = nullptr;
  std::vector<int> map;
};

Report validate(const ModuleMorphism& f);

struct KernelResult {
  DeductiveOperator kernel;
  Report report;  // DO validity, action invariance, and the isomorphism of f̂
};

KernelResult kernel_do(const ModuleMorphism& f);

Report cyclic_projective_witness(const FiniteModule& m, int v, int mu);

}  // namespace mdrkit
