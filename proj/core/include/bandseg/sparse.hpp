#pragma once
// Sparse-graph border discovery: orders only the edges through a dominance
// lattice, maintains the corner frontier in an ordered map, and charges each
// visited edge with the non-edges it encapsulates.

#include <cstdint>
#include <span>
#include <vector>

#include "bandseg/chain.hpp"
#include "bandseg/graph.hpp"
#include "bandseg/heuristic.hpp"

namespace bandseg {

/// DAG over the edges of a graph placed in the strict upper triangle of the
/// ordered adjacency matrix. Node p points to node q when p lies toward the
/// diagonal from q (p.row >= q.row, p.col <= q.col) with no third edge in the
/// spanned box. Topological traversals therefore grow corners from the base.
class EdgeLattice {
 public:
  struct Node {
    Entry pos;  // order positions, row < col
    double weight = 1.0;
  };

  EdgeLattice(Index n, std::vector<Node> nodes, std::vector<std::vector<std::int32_t>> succ);

  Index vertex_count() const { return n_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::int32_t>& successors(std::size_t i) const { return succ_[i]; }
  const std::vector<std::int32_t>& in_degrees() const { return indeg_; }
  std::size_t arrow_count() const { return arrows_; }

 private:
  Index n_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::int32_t>> succ_;
  std::vector<std::int32_t> indeg_;
  std::size_t arrows_ = 0;
};

EdgeLattice build_lattice(const Graph& graph, const VertexOrder& order);

/// Greedy max-weight traversal constrained to a topological order of the
/// lattice. Returns node indices. Throws on NaN weights.
std::vector<std::int32_t> sparse_find_order(const EdgeLattice& lattice,
                                            std::span<const double> weights);

/// For each visited edge, the number of zero entries newly swallowed when the
/// corner is extended to cover it.
std::vector<Count> encapsulated_nonedges(std::span<const std::int32_t> edge_seq,
                                         const EdgeLattice& lattice);

struct SparseIterationInfo {
  long long iter = 0;
  TieKind kind = TieKind::Random;
  double chain_score = 0.0;
  std::size_t chain_length = 0;
  const BorderChain* chain = nullptr;   // if requested
  const EntryOrder* order = nullptr;    // induced full entry order, if requested
};

class SparseIterationObserver {
 public:
  virtual ~SparseIterationObserver() = default;
  virtual void on_iteration(const SparseIterationInfo& info) = 0;
  virtual bool want_orders() const { return false; }
  virtual bool want_chains() const { return false; }
};

/// The hybrid discovery loop over edge orders; chain-for-chain equivalent to
/// the dense sweep applied to the induced full entry order.
HeuristicResult sparse_heuristic_borders(const Graph& graph, const VertexOrder& order,
                                         const HeuristicParams& params,
                                         SparseIterationObserver* observer = nullptr);

}  // namespace bandseg
