#pragma once
// Synthetic banded graphs with planted ground truth.

#include <cstdint>
#include <span>

#include "bandseg/graph.hpp"

namespace bandseg {

struct BandedGraphTruth {
  Graph graph;
  VertexOrder true_order;         // hidden order the bands were planted under
  std::vector<Index> widths;      // cumulative off-diagonal widths of inner bands
  std::vector<double> probs;      // one per band, last covers the remainder
};

/// Plants |probs| bands around the diagonal of a hidden vertex order: entry
/// (i, j) becomes an edge with the probability of the band containing
/// |i - j|. `widths` holds the first |probs|-1 band widths; the last band
/// covers everything farther out. Vertex labels are shuffled unless
/// `shuffle` is false.
BandedGraphTruth generate_banded_graph(Index n, std::span<const Index> widths,
                                       std::span<const double> probs, std::uint64_t seed,
                                       bool shuffle = true);

/// Connected graph whose edges exactly fill a random staircase band around
/// the diagonal of a hidden order; every neighborhood is an interval there.
BandedGraphTruth generate_staircase_graph(Index n, Index max_width, std::uint64_t seed,
                                          bool shuffle = true);

}  // namespace bandseg
