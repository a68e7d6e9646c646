#include "bandseg/chain.hpp"

#include <cmath>

namespace bandseg {

void BorderChain::append(SegmentStats stats, Staircase upper) {
  if (prefix_.empty()) prefix_.assign(1, SegmentStats{});
  segments_.push_back({stats, std::move(upper)});
  prefix_.push_back(prefix_.back() + stats);
}

double BorderChain::total_score(const ScoreModel& model) const {
  double s = 0.0;
  for (const ChainSegment& seg : segments_) s += segment_score(seg.stats, model);
  return s;
}

bool BorderChain::validate(const ValueGrid& grid, std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (segments_.empty()) return fail("chain is empty");
  if (base_ != grid.base()) return fail("chain base differs from grid base");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Staircase& lo = lower(i);
    const Staircase& hi = segments_[i].upper;
    if (!validate_staircase(hi, grid)) return fail("corner is not a valid staircase");
    if (!hi.contains(lo) || hi == lo) return fail("corners do not strictly nest");
    const SegmentStats got = grid.stats_between(lo, hi);
    const SegmentStats want = segments_[i].stats;
    if (got.count != want.count || std::abs(got.sum - want.sum) > 1e-9 * (1.0 + std::abs(want.sum)))
      return fail("segment stats do not match the grid");
    if (i > 0 && compare_density(segments_[i - 1].stats, segments_[i].stats) <= 0)
      return fail("segment densities are not strictly decreasing");
  }
  if (segments_.back().upper != grid.full()) return fail("chain does not reach the full domain");
  return true;
}

}  // namespace bandseg
