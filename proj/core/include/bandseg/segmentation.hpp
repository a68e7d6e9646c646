#pragma once
// Optimal K-segmentation of a border chain: the classic sequence-segmentation
// dynamic program over chain segments, plus an exhaustive oracle.

#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/score.hpp"

namespace bandseg {

struct Band {
  // Chain segment indices [begin, end); empty bands have begin == end and
  // only ever appear at the inner side of the segmentation.
  std::size_t begin = 0, end = 0;
  SegmentStats stats;
  double score = 0.0;
  bool empty() const { return begin == end; }
  friend bool operator==(const Band&, const Band&) = default;
};

struct Segmentation {
  std::vector<Band> bands;
  double total_score = 0.0;
  int effective_k = 0;
  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Score-maximal split of the chain into K consecutive bands. Among equal
/// scores the lexicographically smallest boundary vector wins, which places
/// any empty bands innermost.
Segmentation segment_dp(const BorderChain& chain, int k, const ScoreModel& model);

/// Enumerates every split; must agree with segment_dp exactly.
Segmentation brute_force_segmentation(const BorderChain& chain, int k, const ScoreModel& model);

/// K+1 nested corners from the chain base to the full domain, one per band
/// boundary; empty bands repeat their predecessor.
std::vector<Staircase> bands_to_staircases(const BorderChain& chain, const Segmentation& seg);

}  // namespace bandseg
