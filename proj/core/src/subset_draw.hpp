#pragma once

// Internal: uniform random subsets for random sourcing.  Not installed.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "scfrag/rng.hpp"

namespace scfrag::detail {

// Uniform random s-subset of [0, m), returned sorted.  `pool` is reused
// scratch.
inline std::vector<int> draw_subset(SplitMix64& rng, int m, int s,
                                    std::vector<int>& pool) {
  if (s < 0 || s > m) {
    throw std::invalid_argument("subset size must lie in 0..m");
  }
  pool.resize(m);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < s; ++i) {
    const int j =
        i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> subset(pool.begin(), pool.begin() + s);
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace scfrag::detail
