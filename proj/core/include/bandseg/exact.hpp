#pragma once
// Exact border discovery: L2 grid isotonic regression by recursive
// partitioning, border reconstruction by threshold sweep, and a definitional
// brute-force oracle over the corner lattice.

#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/grid.hpp"

namespace bandseg {

/// Monotone fitted surface; entries outside the active domain hold 0.
struct IsotonicFit {
  Index rows = 0, cols = 0;
  std::vector<double> values;  // row-major rows x cols

  double value(Index r, Index c) const {
    return values[static_cast<std::size_t>(r - 1) * cols + (c - 1)];
  }
  double& value(Index r, Index c) {
    return values[static_cast<std::size_t>(r - 1) * cols + (c - 1)];
  }
  /// Fit decreases toward the domain boundary away from the base.
  bool monotone(const ValueGrid& grid) const;
};

struct IsotonicOptions {
  /// Restrict the regression to the smallest corner containing all non-zero
  /// entries and emit the remainder as one zero level. Sensitive to noise;
  /// off by default.
  bool shrink_to_support = false;
};

IsotonicFit grid_isotonic(const ValueGrid& grid, const IsotonicOptions& opts = {});

/// Chain of threshold sets of the fit, swept over its distinct values in
/// decreasing order. Segment stats are recomputed from the grid.
BorderChain borders_from_fit(const IsotonicFit& fit, const ValueGrid& grid);

/// grid_isotonic + borders_from_fit.
BorderChain exact_borders(const ValueGrid& grid, const IsotonicOptions& opts = {});

/// All corners of the grid between its base and the full domain, ordered by
/// area then lexicographically. Throws when more than `limit` exist.
std::vector<Staircase> enumerate_corners(const ValueGrid& grid, std::size_t limit = 100000);

/// Definitional oracle: enumerates all corners and keeps those admitting no
/// inner corner X and outer corner Y with freq(Y\U) >= freq(U\X).
BorderChain brute_force_borders(const ValueGrid& grid);

}  // namespace bandseg
