#pragma once

#include <set>
#include <vector>

#include "mdrkit/structures.hpp"

namespace testing_support {

using mdrkit::Mask;

// Every relation on the carrier that is a compatible preorder containing ≥.
inline std::set<std::vector<Mask>> brute_drs(const mdrkit::FinitePomonoid& p) {
  int n = p.size();
  std::set<std::vector<Mask>> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * n)); ++code) {
    auto rel = [&](int a, int b) { return ((code >> (a * n + b)) & 1U) != 0; };
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (p.leq(b, a) && !rel(a, b)) ok = false;
        for (int c = 0; c < n && ok; ++c) {
          if (rel(a, b) && rel(b, c) && !rel(a, c)) ok = false;
          if (rel(a, b) && !rel(p.plus(a, c), p.plus(b, c))) ok = false;
        }
      }
    if (!ok) continue;
    std::vector<Mask> rows(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (rel(a, b)) rows[a] |= mdrkit::bit(b);
    out.insert(rows);
  }
  return out;
}

}  // namespace testing_support
