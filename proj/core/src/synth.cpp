#include "bandseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandseg/rng.hpp"

namespace bandseg {

namespace {

VertexOrder shuffled_order(Index n, Rng& rng, bool shuffle) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 1; i <= n; ++i) perm[static_cast<std::size_t>(i - 1)] = i;
  if (shuffle)
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.below(i)]);
  return VertexOrder::from_positions(std::move(perm));
}

}  // namespace

BandedGraphTruth generate_banded_graph(Index n, std::span<const Index> widths,
                                       std::span<const double> probs, std::uint64_t seed,
                                       bool shuffle) {
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (probs.empty()) throw std::invalid_argument("need at least one band probability");
  if (widths.size() + 1 != probs.size())
    throw std::invalid_argument("expected one width per inner band (probs minus one)");
  double prev = 1.0 + 1e-12;
  for (double p : probs) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("band probabilities must lie in (0,1]");
    if (p >= prev) throw std::invalid_argument("band probabilities must strictly decrease");
    prev = p;
  }
  std::vector<Index> cum;
  Index acc = 0;
  for (Index w : widths) {
    if (w < 1) throw std::invalid_argument("band widths must be positive");
    acc += w;
    cum.push_back(acc);
  }

  Rng rng(hash_combine(seed, 0xba9dULL));
  const VertexOrder order = shuffled_order(n, rng, shuffle);

  std::vector<GraphEdge> edges;
  for (Index i = 1; i < n; ++i) {
    // Within a band the edges are i.i.d.; geometric skipping keeps the cost
    // proportional to the edge count.
    Index j = i + 1;
    while (j <= n) {
      const Index off = j - i;
      std::size_t band = 0;
      while (band < cum.size() && off > cum[band]) ++band;
      const Index band_end = band < cum.size() ? i + cum[band] : n;
      const double p = probs[band];
      if (p >= 1.0) {
        for (; j <= band_end; ++j)
          edges.push_back({order.vertex_at(i), order.vertex_at(j), 1.0});
        continue;
      }
      const double u = std::max(rng.uniform(), 1e-300);
      const Index skip = static_cast<Index>(std::floor(std::log(u) / std::log1p(-p)));
      if (skip > band_end - j) {
        j = band_end + 1;
        continue;
      }
      j += skip;
      edges.push_back({order.vertex_at(i), order.vertex_at(j), 1.0});
      ++j;
    }
  }

  BandedGraphTruth out{Graph(n, std::move(edges)), order,
                       std::vector<Index>(widths.begin(), widths.end()),
                       std::vector<double>(probs.begin(), probs.end())};
  return out;
}

BandedGraphTruth generate_staircase_graph(Index n, Index max_width, std::uint64_t seed,
                                          bool shuffle) {
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (max_width < 1) throw std::invalid_argument("max_width must be positive");
  Rng rng(hash_combine(seed, 0x57a1ULL));
  const VertexOrder order = shuffled_order(n, rng, shuffle);

  // Non-decreasing band ends with e(i) >= i+1 keep the graph connected and
  // every neighborhood an interval of the hidden order.
  std::vector<GraphEdge> edges;
  Index end = 1;
  for (Index i = 1; i < n; ++i) {
    end = std::max(end, i + 1);
    const Index cap = std::min<Index>(n, i + max_width);
    if (end < cap) end += static_cast<Index>(rng.below(static_cast<std::uint64_t>(cap - end) + 1));
    for (Index j = i + 1; j <= end; ++j)
      edges.push_back({order.vertex_at(i), order.vertex_at(j), 1.0});
  }
  return {Graph(n, std::move(edges)), order, {}, {}};
}

}  // namespace bandseg
