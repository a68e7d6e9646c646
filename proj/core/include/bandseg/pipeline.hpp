#pragma once
// End-to-end band discovery: order, border discovery, segmentation, optional
// refinement, and the report structure emitted by the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/graph.hpp"
#include "bandseg/heuristic.hpp"
#include "bandseg/segmentation.hpp"
#include "bandseg/spectral.hpp"

namespace bandseg {

enum class DiscoveryMode { Exact, Heuristic, Sparse };
enum class OrderSource { Given, Fiedler };

const char* mode_name(DiscoveryMode mode);
const char* order_source_name(OrderSource source);

struct PipelineParams {
  int k = 1;
  ScoreModel model = ScoreModel::bernoulli();
  DiscoveryMode mode = DiscoveryMode::Heuristic;
  OrderSource order_source = OrderSource::Given;
  bool refine = false;
  std::uint64_t seed = 0;
  long long max_iters = 10000;
  int stall_window = 20;
  int force_random_every = 0;
  FiedlerOptions fiedler;
};

struct BandSummary {
  Staircase upper;
  SegmentStats stats;
  double density = 0.0;
  double score = 0.0;
  bool empty_band = false;
  friend bool operator==(const BandSummary&, const BandSummary&) = default;
};

struct ReportDiagnostics {
  bool converged = true;
  long long total_iters = 0;
  long long flip_iters = 0;
  long long random_iters = 0;
  int refine_rounds = 0;
  long long refine_swaps = 0;
  std::size_t border_count = 0;
  std::string mode;
  std::string order_source;
  std::string model;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
  friend bool operator==(const ReportDiagnostics&, const ReportDiagnostics&) = default;
};

struct BandReport {
  int schema_version = 1;
  std::string domain;  // "triangle" or "rectangle"
  Index rows = 0, cols = 0;
  std::vector<Index> order;  // position -> vertex; identity for matrices
  int k = 0;
  int effective_k = 0;
  std::vector<BandSummary> bands;
  double total_score = 0.0;
  ReportDiagnostics diag;
  friend bool operator==(const BandReport&, const BandReport&) = default;
};

struct PipelineError : std::runtime_error {
  PipelineError(std::string stage_name, const std::string& msg)
      : std::runtime_error(stage_name + " stage: " + msg), stage(std::move(stage_name)) {}
  std::string stage;
};

/// Full pipeline over a graph: vertex order, border discovery in the chosen
/// mode, the segmentation DP, and the optional refinement loop.
BandReport discover_bands(const Graph& graph, const PipelineParams& params);

/// Matrix variant: the given row order is kept; exact or dense-heuristic
/// border discovery only.
BandReport discover_bands(const ValueGrid& grid, const PipelineParams& params);

/// Paper defaults: Bernoulli for unweighted graphs, Poisson for
/// integer-weighted ones, Gaussian otherwise.
ScoreModel default_model(const Graph& graph);

}  // namespace bandseg
