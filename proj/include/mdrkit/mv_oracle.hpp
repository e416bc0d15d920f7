#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdrkit/algebra.hpp"
#include "mdrkit/formula.hpp"

namespace mdrkit {

struct OracleOptions {
  int max_chain = 11;
  int samples = 10000;
  int max_denominator = 64;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Bounded verdict: either a refuting valuation or no refutation found on
// chains up to max_chain and among the random samples.
struct OracleVerdict {
  bool valid = true;
  int max_chain = 0;
  int chain = 0;  // chain size of the refutation, 0 if found by sampling
  std::vector<std::pair<std::string, Rational>> witness;

  std::string label() const;  // "Valid≤N" or "Invalid"
  std::string witness_str() const;  // "p=1/2 q=0"
};

OracleVerdict mv_oracle(const Consecution& c, const OracleOptions& opt = {});

// Exact evaluation of ⊗Γ ≤ ⊗Δ at a rational valuation in [0,1].
bool mv_holds_at(const Consecution& c, const std::vector<std::pair<std::string, Rational>>& val);

}  // namespace mdrkit
