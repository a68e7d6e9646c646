#pragma once
// Shared internals of dense and sparse border sweeps: the pool-adjacent
// merge over ordered blocks and the lexicographic progress vector of the
// convergence proof.

#include <span>
#include <stdexcept>
#include <vector>

#include "bandseg/grid.hpp"
#include "bandseg/score.hpp"

namespace bandseg::detail {

struct PavaBlock {
  SegmentStats stats;
  std::size_t end = 0;  // one past the last input block merged into this one
};

/// Non-increasing-mean pooling. Equal means merge, which realizes the
/// largest-index tie rule of the densest-prefix extension.
inline std::vector<PavaBlock> pava_blocks(std::span<const SegmentStats> input) {
  std::vector<PavaBlock> stack;
  stack.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    SegmentStats cur = input[i];
    std::size_t end = i + 1;
    while (!stack.empty() && compare_density(stack.back().stats, cur) <= 0) {
      cur += stack.back().stats;
      stack.pop_back();
    }
    stack.push_back({cur, end});
  }
  return stack;
}

/// Compares the interleaved (density, cumulative size) vectors of two block
/// sequences. Returns -1/0/+1.
inline int compare_alpha(std::span<const SegmentStats> a, std::span<const SegmentStats> b) {
  Count ca = 0, cb = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int d = compare_density(a[i], b[i]);
    if (d != 0) return d;
    ca += a[i].count;
    cb += b[i].count;
    if (ca != cb) return ca < cb ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  // Sequences over the same domain cannot be strict prefixes of one another.
  throw std::logic_error("progress vectors are prefix-comparable");
}

}  // namespace bandseg::detail
