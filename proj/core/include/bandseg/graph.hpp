#pragma once
// Undirected weighted graphs with 1-based vertex ids, vertex orders, and the
// dense triangle grid of a permuted adjacency matrix.

#include <vector>

#include "bandseg/grid.hpp"

namespace bandseg {

struct GraphEdge {
  Index u = 0, v = 0;
  double w = 1.0;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class Graph {
 public:
  Graph() = default;
  /// Validates ids in [1, n], no self-loops, no duplicates, positive finite
  /// weights. Edges are canonicalized to u < v.
  Graph(Index n, std::vector<GraphEdge> edges);

  Index vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::pair<Index, double>>& neighbors(Index v) const {
    return adj_[static_cast<std::size_t>(v)];
  }
  bool has_edge(Index u, Index v) const;
  bool unit_weights() const { return unit_weights_; }
  bool integral_weights() const { return integral_weights_; }

 private:
  Index n_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<Index, double>>> adj_;  // sorted by neighbor
  bool unit_weights_ = true;
  bool integral_weights_ = true;
};

struct VertexOrder {
  std::vector<Index> to_vertex;  // position (1-based via index+1) -> vertex id
  std::vector<Index> to_pos;     // vertex id -> position, index 0 unused

  static VertexOrder identity(Index n);
  static VertexOrder from_positions(std::vector<Index> position_to_vertex);
  Index vertex_at(Index pos) const { return to_vertex[static_cast<std::size_t>(pos - 1)]; }
  Index position_of(Index v) const { return to_pos[static_cast<std::size_t>(v)]; }
  Index size() const { return static_cast<Index>(to_vertex.size()); }
  VertexOrder reversed() const;
  friend bool operator==(const VertexOrder&, const VertexOrder&) = default;
};

/// Dense strict-upper-triangle grid of the adjacency matrix under `order`.
ValueGrid grid_from_graph(const Graph& graph, const VertexOrder& order);

/// True when the neighborhood of every vertex, together with the vertex, is
/// an interval of consecutive positions under `order`.
bool respects_order(const Graph& graph, const VertexOrder& order);

}  // namespace bandseg
