#pragma once
#include <functional>
#include <vector>

#include "hypertoric/lattice.hpp"

namespace hypertoric::detail {

// Visits every size-n subset of {0, ..., d-1} in lexicographic order.
// The visitor returns false to stop the scan early; witnesses picked by
// first hit are therefore the lexicographically least ones.
inline void for_each_subset(long d, long n,
                            const std::function<bool(const std::vector<long>&)>& visit) {
  std::vector<long> idx(static_cast<size_t>(n));
  std::function<bool(long, long)> rec = [&](long pos, long start) -> bool {
    if (pos == n) return visit(idx);
    for (long i = start; i <= d - (n - pos); ++i) {
      idx[static_cast<size_t>(pos)] = i;
      if (!rec(pos + 1, i + 1)) return false;
    }
    return true;
  };
  rec(0, 0);
}

inline IndexSubset to_one_based(const std::vector<long>& zero_based) {
  std::vector<long> m;
  m.reserve(zero_based.size());
  for (long i : zero_based) m.push_back(i + 1);
  return IndexSubset::of(std::move(m));
}

} // namespace hypertoric::detail
