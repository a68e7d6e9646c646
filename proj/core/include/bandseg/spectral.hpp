#pragma once
// Vertex ordering: Fiedler vector of the graph Laplacian via Lanczos with
// deflation of the constant vector, component-wise ordering, and the greedy
// frontier-swap refinement.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/graph.hpp"
#include "bandseg/segmentation.hpp"

namespace bandseg {

struct FiedlerOptions {
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 0;
};

struct FiedlerError : std::runtime_error {
  explicit FiedlerError(const std::string& msg, double residual)
      : std::runtime_error(msg), best_residual(residual) {}
  double best_residual = 0.0;
};

/// Unit eigenvector of the weighted Laplacian for the second-smallest
/// eigenvalue. Requires a connected graph; throws FiedlerError with the best
/// residual when max_iter matrix products do not reach tol.
std::vector<double> fiedler_vector(const Graph& graph, const FiedlerOptions& opts = {});

/// Vertices sorted by Fiedler value within each connected component (ties by
/// vertex id), components concatenated largest first.
VertexOrder fiedler_order(const Graph& graph, const FiedlerOptions& opts = {});

/// Connected components as vertex-id lists, largest first.
std::vector<std::vector<Index>> connected_components(const Graph& graph);

using Resegmenter =
    std::function<std::pair<BorderChain, Segmentation>(const Graph&, const VertexOrder&)>;

struct RefineOptions {
  int max_rounds = 50;
};

struct RefineResult {
  VertexOrder order;
  BorderChain chain;
  Segmentation segmentation;
  int rounds = 0;
  long long swaps = 0;
};

/// Batched frontier swaps: for each band frontier point, the maximal
/// swap-safe row/column intervals are searched for a non-edge that can take
/// the frontier position; swaps apply in batch, then the data is resegmented.
/// The end-to-end score never decreases; rounds stop at a fixpoint or the cap.
RefineResult refine_order(const Graph& graph, const VertexOrder& order,
                          const BorderChain& chain, const Segmentation& segmentation,
                          const Resegmenter& resegment, const RefineOptions& opts = {});

}  // namespace bandseg
