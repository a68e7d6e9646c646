#include "bandseg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandseg {

Graph::Graph(Index n, std::vector<GraphEdge> edges) : n_(n) {
  if (n <= 0) throw std::invalid_argument("graph needs at least one vertex");
  for (GraphEdge& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw std::invalid_argument("edge weights must be positive and finite");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.w != 1.0) unit_weights_ = false;
    if (e.w != std::floor(e.w)) integral_weights_ = false;
  }
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw std::invalid_argument("duplicate edge");
  edges_ = std::move(edges);
  adj_.assign(static_cast<std::size_t>(n) + 1, {});
  for (const GraphEdge& e : edges_) {
    adj_[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.w);
    adj_[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.w);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(Index u, Index v) const {
  const auto& nb = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(nb.begin(), nb.end(), std::pair(v, 0.0));
  return it != nb.end() && it->first == v;
}

VertexOrder VertexOrder::identity(Index n) {
  VertexOrder o;
  o.to_vertex.resize(static_cast<std::size_t>(n));
  o.to_pos.resize(static_cast<std::size_t>(n) + 1);
  for (Index i = 1; i <= n; ++i) {
    o.to_vertex[static_cast<std::size_t>(i - 1)] = i;
    o.to_pos[static_cast<std::size_t>(i)] = i;
  }
  return o;
}

VertexOrder VertexOrder::from_positions(std::vector<Index> position_to_vertex) {
  const Index n = static_cast<Index>(position_to_vertex.size());
  VertexOrder o;
  o.to_vertex = std::move(position_to_vertex);
  o.to_pos.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index p = 1; p <= n; ++p) {
    const Index v = o.to_vertex[static_cast<std::size_t>(p - 1)];
    if (v < 1 || v > n || o.to_pos[static_cast<std::size_t>(v)] != 0)
      throw std::invalid_argument("order is not a permutation of 1..n");
    o.to_pos[static_cast<std::size_t>(v)] = p;
  }
  return o;
}

VertexOrder VertexOrder::reversed() const {
  std::vector<Index> rev(to_vertex.rbegin(), to_vertex.rend());
  return from_positions(std::move(rev));
}

ValueGrid grid_from_graph(const Graph& graph, const VertexOrder& order) {
  const Index n = graph.vertex_count();
  if (order.size() != n) throw std::invalid_argument("order size does not match graph");
  std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
  for (const GraphEdge& e : graph.edges()) {
    Index a = order.position_of(e.u);
    Index b = order.position_of(e.v);
    if (a > b) std::swap(a, b);
    values[static_cast<std::size_t>(a - 1) * n + (b - 1)] = e.w;
  }
  return ValueGrid::upper_triangle(n, std::move(values));
}

bool respects_order(const Graph& graph, const VertexOrder& order) {
  const Index n = graph.vertex_count();
  for (Index v = 1; v <= n; ++v) {
    const Index p = order.position_of(v);
    Index lo = p, hi = p;
    const auto& nb = graph.neighbors(v);
    for (const auto& [u, w] : nb) {
      (void)w;
      lo = std::min(lo, order.position_of(u));
      hi = std::max(hi, order.position_of(u));
    }
    if (hi - lo != static_cast<Index>(nb.size())) return false;
  }
  return true;
}

}  // namespace bandseg
