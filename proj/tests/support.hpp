#pragma once

#include <random>
#include <string>
#include <vector>

#include "mdrkit/formula.hpp"

namespace testing_support {

inline std::string data_path(const std::string& file) { return std::string(MDRKIT_DATA_DIR) + "/" + file; }

inline mdrkit::Formula random_formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars,
                                      bool with_one = true) {
  using mdrkit::Formula;
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  int k = pick(rng);
  if (k == 0 || k == 1) {
    if (with_one && std::uniform_int_distribution<int>(0, 7)(rng) == 0) return Formula::one();
    return Formula::var(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
  }
  Formula l = random_formula(rng, depth - 1, vars, with_one);
  Formula r = random_formula(rng, depth - 1, vars, with_one);
  switch (k) {
    case 2: return Formula::meet(l, r);
    case 3: return Formula::join(l, r);
    case 4: return Formula::fuse(l, r);
    default: return Formula::impl(l, r);
  }
}

inline mdrkit::FMultiset random_fmultiset(std::mt19937_64& rng, int max_size, int depth,
                                          const std::vector<std::string>& vars) {
  mdrkit::FMultiset out;
  int n = std::uniform_int_distribution<int>(0, max_size)(rng);
  for (int i = 0; i < n; ++i) out.insert(random_formula(rng, depth, vars));
  return out;
}

}  // namespace testing_support
