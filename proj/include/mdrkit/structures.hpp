#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdrkit/report.hpp"

namespace mdrkit {

// Subset of a carrier of at most 64 elements.
using Mask = std::uint64_t;

inline bool has(Mask m, int i) { return (m >> i) & 1U; }
inline Mask bit(int i) { return Mask{1} << i; }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
std::string mask_str(Mask m, const std::vector<std::string>& names);

// Abelian pomonoid given by explicit tables; dual integrality is validated,
// not assumed.
struct FinitePomonoid {
  std::string name;
  std::vector<std::string> elements;
  std::vector<Mask> above;  // above[a] = {b : a <= b}
  std::vector<int> add;     // row-major n*n
  int zero = 0;

  int size() const { return static_cast<int>(elements.size()); }
  bool leq(int a, int b) const { return has(above[a], b); }
  int plus(int a, int b) const { return add[a * size() + b]; }
  Mask below(int a) const;
  Mask all() const { return full_mask(size()); }
  int index(const std::string& element) const;  // throws InputError
  bool is_downset(Mask m) const;
  bool is_upset(Mask m) const;
  Mask downset_of(Mask m) const;

  // Checks sizes and ranges; throws InputError on malformed tables.
  void check_shape() const;
};

FinitePomonoid make_pomonoid(const std::string& name, const std::vector<std::string>& elements,
                             const std::vector<std::vector<bool>>& leq,
                             const std::vector<std::vector<int>>& add, int zero);
// {0..n-1} with the usual order and x+y = min(x+y, n-1).
FinitePomonoid truncated_sum(int n);
// {0..n-1} with the usual order and x+y = max(x, y).
FinitePomonoid max_chain(int n);
// <℘(A), ⊆, ∪, ∅> for |A| = k.
FinitePomonoid powerset_pomonoid(int k);

Report validate(const FinitePomonoid& p);

struct FinitePoSemiring {
  FinitePomonoid additive;
  std::vector<int> mul;  // row-major n*n
  int one = 0;

  int size() const { return additive.size(); }
  int times(int a, int b) const { return mul[a * size() + b]; }
};

Report validate(const FinitePoSemiring& s);

struct FiniteModule {
  FinitePoSemiring scalars;
  FinitePomonoid carrier;
  std::vector<int> act;  // act[s * carrier.size() + a]

  int apply(int s, int a) const { return act[s * carrier.size() + a]; }
};

Report validate(const FiniteModule& m);

// The semiring acting on its own additive pomonoid by left multiplication.
FiniteModule regular_module(const FinitePoSemiring& s);

}  // namespace mdrkit
