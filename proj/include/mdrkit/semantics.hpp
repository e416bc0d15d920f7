#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mdrkit/algebra.hpp"
#include "mdrkit/formula.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/report.hpp"
#include "mdrkit/structures.hpp"

namespace mdrkit {

// Finite multiset over a carrier {0..n-1}, stored as counts.
using Bag = std::vector<int>;

bool bag_leq(const Bag& a, const Bag& b);
Bag bag_sum(const Bag& a, const Bag& b);
Bag bag_diff(const Bag& a, const Bag& b);  // truncated
int bag_size(const Bag& a);
Bag bag_of(int n, const std::vector<int>& elems);
std::string bag_str(const Bag& b, const std::vector<std::string>& names);
// Calls visit(sub) for every sub-bag; stops early when visit returns false.
bool for_each_subbag(const Bag& b, const std::function<bool(const Bag&)>& visit);

// Downset of bags, given by its maximal elements.
struct Downset {
  int n = 0;
  std::vector<Bag> gens;  // antichain, sorted

  bool contains(const Bag& b) const;
  bool empty() const { return gens.empty(); }
  std::set<Bag> members() const;
  std::string str(const std::vector<std::string>& names) const;
  friend bool operator==(const Downset& a, const Downset& b) { return a.n == b.n && a.gens == b.gens; }
};

Downset make_downset(int n, std::vector<Bag> gens);
Downset parse_downset_gens(const FiniteAlgebra& a, const std::vector<std::string>& literals);

struct Hypermatrix {
  FiniteAlgebra algebra;
  Downset filter;

  std::string str() const;
};

Report validate(const Hypermatrix& h);

enum class HyperMode { Contextual, Plain };

struct HyperVerdict {
  bool holds = true;
  std::string witness;  // "p=a q=b context=[..]"
};

// Throws SizeGuardError when the valuation space exceeds `guard`.
HyperVerdict hyper_check(const Hypermatrix& h, const Consecution& c, HyperMode mode,
                         std::uint64_t guard = 20000000);
bool hyper_consequence(const Hypermatrix& h, const Consecution& c, HyperMode mode);

struct FilterOptions {
  int max_size = 8;
  int max_iterations = 1000;
};

struct FilterResult {
  Downset filter;
  bool truncated = false;
  int iterations = 0;
  Report verification;  // filled only when untruncated
};

FilterResult filter_generate(const AxiomaticSystem& as, const FiniteAlgebra& a,
                             const std::vector<Bag>& seed, const FilterOptions& opt = {});

// Equivalence on {0..n-1}: cls[i] = least element of the class of i.
using Partition = std::vector<int>;

Partition identity_partition(int n);
Partition total_partition(int n);
Partition partition_join(const Partition& a, const Partition& b);
bool partition_leq(const Partition& a, const Partition& b);  // a refines b
std::string partition_str(const Partition& p, const std::vector<std::string>& names);
bool is_congruence(const FiniteAlgebra& a, const Partition& p);
Partition congruence_closure(const FiniteAlgebra& a, Partition p);
// All congruences by joins of principal ones; guarded at |A| <= 5.
std::vector<Partition> congruences(const FiniteAlgebra& a);
bool compatible(const Downset& f, const Partition& p);

Partition leibniz(const Hypermatrix& h);
Hypermatrix quotient(const Hypermatrix& h, const Partition& p);
Hypermatrix reduce_model(const Hypermatrix& h);

struct SequentModel {
  FiniteAlgebra algebra;
  std::set<std::vector<int>> sequences;

  std::string str() const;
};

SequentModel to_sequents(const Hypermatrix& h);
// Throws InputError unless the multisets of the sequences form a downset.
Hypermatrix to_multisets(const SequentModel& s);
bool sequent_compatible(const SequentModel& s, const Partition& p);
Partition leibniz_sequents(const SequentModel& s);
SequentModel reduce_sequents(const SequentModel& s);
// Checks to_multisets(to_sequents(h)) = h and that reduction commutes with the
// bridge.
Report gentzen_check(const Hypermatrix& h);

// Designation into a finite pomonoid D (or, when `free_d`, into A♭ itself
// with f = id and G given as a downset of bags).
struct MonoidMatrix {
  FiniteAlgebra algebra;
  bool free_d = false;
  FinitePomonoid d;
  Mask g = 0;
  std::vector<int> f;  // f[a] in D
  Downset free_g;

  int value(const Bag& x) const;  // finite D only
  bool designated(const Bag& x) const;
  std::string str() const;
};

Report validate(const MonoidMatrix& m);

struct HyperResult {
  Hypermatrix hyper;
  bool truncated = false;
};

HyperResult to_hyper(const MonoidMatrix& m, int max_size = 8);
MonoidMatrix from_hyper(const Hypermatrix& h);
// g_D'(M) for a pomonoid homomorphism g: D -> D'.
MonoidMatrix push(const MonoidMatrix& m, const FinitePomonoid& d2, const std::vector<int>& g);
// f_D(M) for a free matrix M = <A, A♭, F, id> along f: A♭ -> D.
MonoidMatrix push_free(const MonoidMatrix& m, const FinitePomonoid& d, const std::vector<int>& f);

struct RoundtripReport {
  bool hyper_identity = false;    // H^{M^H} = H for H = H^M
  bool matrix_identity = false;   // f_D(M^{H^M}) = M
  bool attained_identity = false; // f_D(M^{H^M}) = <A, D, (G ∩ f[A♭]], f>
  Mask pushed_g = 0;
  Mask attained_g = 0;
  bool truncated = false;
};

RoundtripReport roundtrip_check(const MonoidMatrix& m, int max_size = 8);

// Fuzzy matrix over the Łukasiewicz chain of `chain` elements, t-norm ⊗,
// designated set [threshold, 1] and f given on the carrier.
struct FuzzyMatrix {
  int chain = 2;
  Rational threshold = 1;
  std::vector<Rational> f;

  std::string str() const;
};

FuzzyMatrix fuzzy_identity(int chain, const Rational& threshold = 1);
Rational luk_tnorm(const Rational& x, const Rational& y);
// Strict monotonicity and ⊗-preservation on the carrier.
Report validate(const FuzzyMatrix& m);

HyperVerdict fuzzy_check(const FuzzyMatrix& m, const Consecution& c);
// Family over all thresholds: for all e, f(e(Γ)) <= f(e(Δ)).
HyperVerdict fuzzy_family_check(const FuzzyMatrix& m, const Consecution& c);
bool fuzzy_consequence(const std::vector<FuzzyMatrix>& ms, const Consecution& c);

}  // namespace mdrkit
