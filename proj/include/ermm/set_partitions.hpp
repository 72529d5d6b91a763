#pragma once

#include <functional>
#include <vector>

namespace ermm {

// Visits every set partition of {0..n-1} as a restricted-growth string:
// block[i] is the block of element i, blocks numbered in order of first
// appearance. `blocks` is the number of blocks s.
inline void for_each_set_partition(unsigned n,
                                   const std::function<void(const std::vector<unsigned>& block, unsigned blocks)>& visit) {
  if (n == 0) {
    visit({}, 0);
    return;
  }
  std::vector<unsigned> block(n, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned used) {
    if (i == n) {
      visit(block, used);
      return;
    }
    for (unsigned b = 0; b <= used; ++b) {
      block[i] = b;
      rec(i + 1, b == used ? used + 1 : used);
    }
  };
  block[0] = 0;
  rec(1, 1);
}

}  // namespace ermm
