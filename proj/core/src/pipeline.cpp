#include "bandseg/pipeline.hpp"

#include <cmath>

#include "bandseg/exact.hpp"
#include "bandseg/sparse.hpp"

namespace bandseg {

namespace {

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

struct DiscoveryOutcome {
  BorderChain chain;
  bool converged = true;
  long long total_iters = 0, flip_iters = 0, random_iters = 0;
};

DiscoveryOutcome discover_chain(const Graph& graph, const VertexOrder& order,
                                const PipelineParams& params) {
  DiscoveryOutcome out;
  HeuristicParams hp;
  hp.stall_window = params.stall_window;
  hp.max_iters = params.max_iters;
  hp.seed = params.seed;
  hp.model = params.model;
  hp.force_random_every = params.force_random_every;
  switch (params.mode) {
    case DiscoveryMode::Exact:
      out.chain = exact_borders(grid_from_graph(graph, order));
      break;
    case DiscoveryMode::Heuristic: {
      HeuristicResult r = heuristic_borders(grid_from_graph(graph, order), hp);
      out = {std::move(r.chain), r.converged, r.total_iters, r.flip_iters, r.random_iters};
      break;
    }
    case DiscoveryMode::Sparse: {
      HeuristicResult r = sparse_heuristic_borders(graph, order, hp);
      out = {std::move(r.chain), r.converged, r.total_iters, r.flip_iters, r.random_iters};
      break;
    }
  }
  return out;
}

BandReport assemble_report(const BorderChain& chain, const Segmentation& seg,
                           const PipelineParams& params, std::vector<Index> order_vec,
                           const char* domain, Index rows, Index cols) {
  BandReport rep;
  rep.domain = domain;
  rep.rows = rows;
  rep.cols = cols;
  rep.order = std::move(order_vec);
  rep.k = params.k;
  rep.effective_k = seg.effective_k;
  rep.total_score = seg.total_score;
  const std::vector<Staircase> stairs = bands_to_staircases(chain, seg);
  for (std::size_t t = 0; t < seg.bands.size(); ++t) {
    const Band& b = seg.bands[t];
    BandSummary s;
    s.upper = stairs[t + 1];
    s.stats = b.stats;
    s.score = b.score;
    s.empty_band = b.empty();
    s.density = b.empty() ? 0.0 : density(b.stats);
    rep.bands.push_back(std::move(s));
  }
  rep.diag.mode = mode_name(params.mode);
  rep.diag.order_source = order_source_name(params.order_source);
  rep.diag.model = model_name(params.model.kind);
  rep.diag.sigma2 = params.model.sigma2;
  rep.diag.seed = params.seed;
  rep.diag.border_count = chain.size();
  return rep;
}

void check_model(const ValueGrid& grid, const ScoreModel& model) {
  std::string why;
  if (!model_compatible(grid, model, &why)) throw std::invalid_argument(why);
}

}  // namespace

const char* mode_name(DiscoveryMode mode) {
  switch (mode) {
    case DiscoveryMode::Exact: return "exact";
    case DiscoveryMode::Heuristic: return "heuristic";
    case DiscoveryMode::Sparse: return "sparse";
  }
  return "?";
}

const char* order_source_name(OrderSource source) {
  return source == OrderSource::Given ? "given" : "fiedler";
}

ScoreModel default_model(const Graph& graph) {
  if (graph.unit_weights()) return ScoreModel::bernoulli();
  if (graph.integral_weights()) return ScoreModel::poisson();
  return ScoreModel::gaussian();
}

BandReport discover_bands(const Graph& graph, const PipelineParams& params) {
  if (params.k < 1) throw PipelineError("input", "k must be at least 1");
  run_stage("input", [&] {
    if (params.model.kind == ModelKind::Bernoulli && !graph.unit_weights())
      throw std::invalid_argument("bernoulli model requires an unweighted graph");
    return 0;
  });

  VertexOrder order = run_stage("order", [&] {
    if (params.order_source == OrderSource::Fiedler) {
      FiedlerOptions fo = params.fiedler;
      fo.seed = fo.seed == 0 ? params.seed : fo.seed;
      return fiedler_order(graph, fo);
    }
    return VertexOrder::identity(graph.vertex_count());
  });

  DiscoveryOutcome disc = run_stage("borders", [&] { return discover_chain(graph, order, params); });
  Segmentation seg =
      run_stage("segmentation", [&] { return segment_dp(disc.chain, params.k, params.model); });

  int refine_rounds = 0;
  long long refine_swaps = 0;
  if (params.refine) {
    auto refined = run_stage("refine", [&] {
      Resegmenter reseg = [&](const Graph& g, const VertexOrder& o) {
        DiscoveryOutcome d = discover_chain(g, o, params);
        Segmentation s = segment_dp(d.chain, params.k, params.model);
        return std::pair(std::move(d.chain), std::move(s));
      };
      return refine_order(graph, order, disc.chain, seg, reseg);
    });
    order = std::move(refined.order);
    disc.chain = std::move(refined.chain);
    seg = std::move(refined.segmentation);
    refine_rounds = refined.rounds;
    refine_swaps = refined.swaps;
  }

  const Index n = graph.vertex_count();
  std::vector<Index> order_vec(order.to_vertex);
  BandReport rep =
      assemble_report(disc.chain, seg, params, std::move(order_vec), "triangle", n, n);
  rep.diag.converged = disc.converged;
  rep.diag.total_iters = disc.total_iters;
  rep.diag.flip_iters = disc.flip_iters;
  rep.diag.random_iters = disc.random_iters;
  rep.diag.refine_rounds = refine_rounds;
  rep.diag.refine_swaps = refine_swaps;
  return rep;
}

BandReport discover_bands(const ValueGrid& grid, const PipelineParams& params) {
  if (params.k < 1) throw PipelineError("input", "k must be at least 1");
  run_stage("input", [&] {
    if (params.order_source == OrderSource::Fiedler)
      throw std::invalid_argument("fiedler ordering requires a graph input");
    if (params.mode == DiscoveryMode::Sparse)
      throw std::invalid_argument("sparse mode requires a graph input");
    if (params.refine) throw std::invalid_argument("refinement requires a graph input");
    check_model(grid, params.model);
    return 0;
  });

  DiscoveryOutcome disc = run_stage("borders", [&] {
    DiscoveryOutcome out;
    if (params.mode == DiscoveryMode::Exact) {
      out.chain = exact_borders(grid);
    } else {
      HeuristicParams hp;
      hp.stall_window = params.stall_window;
      hp.max_iters = params.max_iters;
      hp.seed = params.seed;
      hp.model = params.model;
      hp.force_random_every = params.force_random_every;
      HeuristicResult r = heuristic_borders(grid, hp);
      out = {std::move(r.chain), r.converged, r.total_iters, r.flip_iters, r.random_iters};
    }
    return out;
  });
  Segmentation seg =
      run_stage("segmentation", [&] { return segment_dp(disc.chain, params.k, params.model); });

  std::vector<Index> identity(static_cast<std::size_t>(grid.rows()));
  for (Index r = 1; r <= grid.rows(); ++r) identity[static_cast<std::size_t>(r - 1)] = r;
  BandReport rep = assemble_report(disc.chain, seg, params, std::move(identity), "rectangle",
                                   grid.rows(), grid.cols());
  rep.diag.converged = disc.converged;
  rep.diag.total_iters = disc.total_iters;
  rep.diag.flip_iters = disc.flip_iters;
  rep.diag.random_iters = disc.random_iters;
  return rep;
}

}  // namespace bandseg
