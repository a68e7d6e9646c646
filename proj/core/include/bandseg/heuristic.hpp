#pragma once
// Iterative heuristic border discovery: monotonic entry orders built by a
// greedy weighted traversal, borders recovered by a linear densest-prefix
// sweep, and the flip/random tie-breaker loop run until the borders stall.

#include <cstdint>
#include <span>
#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/grid.hpp"
#include "bandseg/score.hpp"

namespace bandseg {

/// A permutation of the grid's active entries whose every prefix is a corner.
struct EntryOrder {
  std::vector<Entry> seq;

  bool monotonic(const ValueGrid& grid) const;
  friend bool operator==(const EntryOrder&, const EntryOrder&) = default;
};

enum class TieKind { Flip, Random };

struct HeuristicParams {
  int stall_window = 20;
  long long max_iters = 10000;
  std::uint64_t seed = 0;
  ScoreModel model = ScoreModel::bernoulli();
  /// When positive, inject a random tie-breaker after this many flip
  /// iterations even if no 2-cycle was seen. Off by default.
  int force_random_every = 0;
};

struct HeuristicResult {
  BorderChain chain;  // best chain seen, by total segment score
  bool converged = false;
  long long total_iters = 0;
  long long flip_iters = 0;
  long long random_iters = 0;
  double best_score = 0.0;
};

struct IterationInfo {
  long long iter = 0;
  TieKind kind = TieKind::Random;
  double chain_score = 0.0;
  std::size_t chain_length = 0;
  const BorderChain* chain = nullptr;  // if requested / available
  const EntryOrder* order = nullptr;   // if requested
};

class IterationObserver {
 public:
  virtual ~IterationObserver() = default;
  virtual void on_iteration(const IterationInfo& info) = 0;
  virtual bool want_orders() const { return false; }
  virtual bool want_chains() const { return false; }
};

/// A valid monotonic entry order from uniform-random weights; deterministic
/// given the seed.
EntryOrder random_monotonic_order(const ValueGrid& grid, std::uint64_t seed);

/// Greedy max-weight traversal of Algorithm FindOrder: an entry becomes
/// available once its toward-base neighbors are visited. `weights` is a full
/// row-major rows x cols array; only active entries are read. Throws on NaN.
EntryOrder find_order(const ValueGrid& grid, std::span<const double> weights);

/// Borders of a monotonic entry order: repeated densest-prefix extension with
/// largest-index ties, computed in one amortized-linear sweep.
BorderChain borders_of_order(const EntryOrder& order, const ValueGrid& grid);

/// Hybrid loop: flip tie-breaker until a 2-cycle, one random tie-breaker,
/// repeat until the borders survive `stall_window` random applications or
/// `max_iters` is hit (then `converged` is false and the best chain so far is
/// returned).
HeuristicResult heuristic_borders(const ValueGrid& grid, const HeuristicParams& params,
                                  IterationObserver* observer = nullptr);

}  // namespace bandseg
