#pragma once
// Border chains: the ordered difference segments between consecutive nested
// corners, with additive statistics and O(1) merged-range queries.

#include <string>
#include <vector>

#include "bandseg/grid.hpp"
#include "bandseg/score.hpp"

namespace bandseg {

struct ChainSegment {
  SegmentStats stats;
  Staircase upper;  // the corner closing this segment
  friend bool operator==(const ChainSegment&, const ChainSegment&) = default;
};

class BorderChain {
 public:
  BorderChain() = default;
  explicit BorderChain(Staircase base) : base_(std::move(base)) { rebuild_prefix(); }

  void append(SegmentStats stats, Staircase upper);

  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const ChainSegment& segment(std::size_t i) const { return segments_[i]; }
  const std::vector<ChainSegment>& segments() const { return segments_; }
  const Staircase& base() const { return base_; }
  const Staircase& upper(std::size_t i) const { return segments_[i].upper; }

  /// Corner below segment i: the base for i == 0.
  const Staircase& lower(std::size_t i) const {
    return i == 0 ? base_ : segments_[i - 1].upper;
  }

  /// Merged stats of segments [from, to), from prefix sums.
  SegmentStats range_stats(std::size_t from, std::size_t to) const {
    return prefix_[to] - prefix_[from];
  }
  const SegmentStats& total_stats() const { return prefix_.back(); }

  double total_score(const ScoreModel& model) const;

  /// Spot-checks the chain invariants against a grid: nested corners from the
  /// base to the full domain, stats matching the grid, strictly decreasing
  /// densities. Returns false and fills `why` on the first violation.
  bool validate(const ValueGrid& grid, std::string* why = nullptr) const;

  friend bool operator==(const BorderChain&, const BorderChain&) = default;

 private:
  void rebuild_prefix() {
    prefix_.assign(1, SegmentStats{});
    for (const ChainSegment& s : segments_) prefix_.push_back(prefix_.back() + s.stats);
  }

  Staircase base_;
  std::vector<ChainSegment> segments_;
  std::vector<SegmentStats> prefix_;  // prefix_[i] = stats of segments [0, i)
};

}  // namespace bandseg
