#include "bandseg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

#include "bandseg/rng.hpp"
#include "pava_detail.hpp"

namespace bandseg {

namespace {

struct HeapItem {
  Index rank;
  double tie;
  std::int32_t node;
};
struct HeapLess {
  bool operator()(const HeapItem& a, const HeapItem& b) const {
    if (a.rank != b.rank) return a.rank > b.rank;
    if (a.tie != b.tie) return a.tie < b.tie;
    return a.node > b.node;
  }
};

// Corner frontier of the visited edge set: the dominance-maximal visited
// edges, kept as a row -> col map in which both coordinates increase.
class FrontierTracker {
 public:
  void reset() {
    f_.clear();
    area_ = 0;
    hash_xor_ = 0;
    hash_sum_ = 0;
  }

  Count area() const { return area_; }
  std::pair<std::uint64_t, std::uint64_t> signature() const { return {hash_xor_, hash_sum_}; }

  /// Extends the corner to cover `e`; returns the newly covered cell count
  /// (including `e` itself). Optionally collects the new cells, the edge
  /// last, in an order whose prefixes stay corners.
  Count add(Entry e, std::vector<Entry>* collect = nullptr) {
    const Index r = e.row, c = e.col;
    Count delta = 0;
    auto it = f_.upper_bound(r);
    Index cur_e = it == f_.begin() ? 0 : std::prev(it)->second;
    Index u = r;
    while (u < c) {
      if (cur_e >= c) break;
      const Index span_end = it == f_.end() ? c : std::min<Index>(it->first, c);
      const Index b = span_end - 1;
      if (cur_e > u) {
        const Index hi = std::min<Index>(b, cur_e - 1);
        if (hi >= u) {
          delta += static_cast<Count>(c - cur_e) * (hi - u + 1);
          u = hi + 1;
        }
      }
      if (u <= b) {
        const Count first = c - u, last = c - b;
        delta += (first + last) * (b - u + 1) / 2;
        u = b + 1;
      }
      if (it != f_.end() && it->first == span_end) {
        cur_e = it->second;
        ++it;
      } else {
        break;
      }
    }
    if (collect) {
      // Bottom row first so every prefix keeps its toward-diagonal closure.
      for (Index row = c - 1; row >= r; --row) {
        const Index from = std::max(row, boundary(row)) + 1;
        for (Index col = from; col <= c; ++col)
          if (!(row == r && col == c)) collect->push_back({row, col});
      }
      collect->push_back({r, c});
    }
    auto d = f_.lower_bound(r);
    while (d != f_.end() && d->second <= c) {
      unmix(d->first, d->second);
      d = f_.erase(d);
    }
    f_.emplace(r, c);
    mix(r, c);
    area_ += delta;
    return delta;
  }

  /// Current corner as per-row widths over an n-vertex triangle.
  Staircase staircase(Index n) const {
    std::vector<Index> w(static_cast<std::size_t>(n), 0);
    auto it = f_.begin();
    Index cur_e = 0;
    for (Index row = 1; row <= n; ++row) {
      while (it != f_.end() && it->first <= row) {
        cur_e = it->second;
        ++it;
      }
      w[static_cast<std::size_t>(row - 1)] = std::max<Index>(0, std::min(cur_e, n) - row);
    }
    return Staircase(std::move(w));
  }

 private:
  Index boundary(Index row) const {
    auto it = f_.upper_bound(row);
    return it == f_.begin() ? 0 : std::prev(it)->second;
  }
  static std::uint64_t cell_mix(Index r, Index c) {
    return splitmix64((static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(c));
  }
  void mix(Index r, Index c) {
    const std::uint64_t m = cell_mix(r, c);
    hash_xor_ ^= m;
    hash_sum_ += m;
  }
  void unmix(Index r, Index c) {
    const std::uint64_t m = cell_mix(r, c);
    hash_xor_ ^= m;
    hash_sum_ -= m;
  }

  std::map<Index, Index> f_;
  Count area_ = 0;
  std::uint64_t hash_xor_ = 0, hash_sum_ = 0;
};

template <class RankFn, class TieFn>
std::vector<std::int32_t> traverse(const EdgeLattice& lattice, RankFn rank, TieFn tie) {
  const std::size_t n = lattice.node_count();
  std::vector<std::int32_t> indeg = lattice.in_degrees();
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapLess> heap;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0)
      heap.push({rank(static_cast<std::int32_t>(i)), tie(static_cast<std::int32_t>(i)),
                 static_cast<std::int32_t>(i)});
  std::vector<std::int32_t> seq;
  seq.reserve(n);
  while (!heap.empty()) {
    const HeapItem top = heap.top();
    heap.pop();
    seq.push_back(top.node);
    for (std::int32_t s : lattice.successors(static_cast<std::size_t>(top.node)))
      if (--indeg[static_cast<std::size_t>(s)] == 0) heap.push({rank(s), tie(s), s});
  }
  if (seq.size() != n) throw std::logic_error("edge lattice is cyclic");
  return seq;
}

// One iteration's worth of chain state: PAVA-merged blocks over the visited
// edge sequence plus the per-block corner signatures for cheap comparisons.
struct SparseSweep {
  std::vector<SegmentStats> blocks;
  std::vector<std::size_t> block_end;  // per block: one past its last raw position
  std::vector<Index> rank_of_node;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> block_sig;
  std::vector<Count> covered;  // per raw position: cells newly covered
  bool has_tail = false;       // final block is the never-covered zero region
  double score = 0.0;

  bool same_chain(const SparseSweep& o) const {
    return blocks == o.blocks && block_sig == o.block_sig;
  }
};

SparseSweep sweep_edges(const std::vector<std::int32_t>& seq, const EdgeLattice& lattice,
                        Count active_area, const ScoreModel& model) {
  SparseSweep out;
  FrontierTracker frontier;
  const std::size_t m = seq.size();
  out.covered.resize(m);
  std::vector<SegmentStats> raw(m);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_sig(m);
  Count total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeLattice::Node& nd = lattice.node(static_cast<std::size_t>(seq[i]));
    const Count delta = frontier.add(nd.pos);
    out.covered[i] = delta;
    raw[i] = {delta, nd.weight, nd.weight * nd.weight};
    raw_sig[i] = frontier.signature();
    total += delta;
  }

  std::vector<detail::PavaBlock> stack;
  for (std::size_t i = 0; i < m; ++i) {
    SegmentStats cur = raw[i];
    std::size_t end = i + 1;
    while (!stack.empty() && compare_density(stack.back().stats, cur) <= 0) {
      cur += stack.back().stats;
      stack.pop_back();
    }
    stack.push_back({cur, end});
  }

  out.rank_of_node.assign(lattice.node_count(), 0);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < stack.size(); ++b) {
    for (; pos < stack[b].end; ++pos)
      out.rank_of_node[static_cast<std::size_t>(seq[pos])] = static_cast<Index>(b);
    out.blocks.push_back(stack[b].stats);
    out.block_end.push_back(stack[b].end);
    out.block_sig.push_back(raw_sig[stack[b].end - 1]);
  }
  if (total < active_area) {
    // Entries never swallowed form the outermost zero segment.
    out.blocks.push_back({active_area - total, 0.0, 0.0});
    out.block_end.push_back(m);
    out.block_sig.push_back({~0ULL, ~0ULL});
    out.has_tail = true;
  }
  for (const SegmentStats& s : out.blocks) out.score += segment_score(s, model);
  return out;
}

BorderChain materialize_chain(const std::vector<std::int32_t>& seq, const SparseSweep& sweep,
                              const EdgeLattice& lattice, Count active_area) {
  (void)active_area;
  const Index n = lattice.vertex_count();
  BorderChain chain(Staircase::zeros(n));
  FrontierTracker frontier;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < sweep.blocks.size(); ++b) {
    if (sweep.has_tail && b + 1 == sweep.blocks.size()) {
      // Zero tail: closes the chain at the full triangle.
      std::vector<Index> w(static_cast<std::size_t>(n));
      for (Index r = 1; r <= n; ++r) w[static_cast<std::size_t>(r - 1)] = n - r;
      chain.append(sweep.blocks[b], Staircase(std::move(w)));
      break;
    }
    for (; pos < sweep.block_end[b]; ++pos)
      frontier.add(lattice.node(static_cast<std::size_t>(seq[pos])).pos);
    chain.append(sweep.blocks[b], frontier.staircase(n));
  }
  return chain;
}

EntryOrder induced_order(const std::vector<std::int32_t>& seq, const EdgeLattice& lattice,
                         Count active_area) {
  const Index n = lattice.vertex_count();
  EntryOrder order;
  order.seq.reserve(static_cast<std::size_t>(active_area));
  FrontierTracker frontier;
  for (std::int32_t id : seq)
    frontier.add(lattice.node(static_cast<std::size_t>(id)).pos, &order.seq);
  // Remaining cells outside the final corner, bottom row first.
  const Staircase covered = frontier.staircase(n);
  for (Index r = n; r >= 1; --r)
    for (Index c = r + covered.width(r) + 1; c <= n; ++c) order.seq.push_back({r, c});
  return order;
}

}  // namespace

EdgeLattice::EdgeLattice(Index n, std::vector<Node> nodes,
                         std::vector<std::vector<std::int32_t>> succ)
    : n_(n), nodes_(std::move(nodes)), succ_(std::move(succ)) {
  indeg_.assign(nodes_.size(), 0);
  for (const auto& out : succ_) {
    arrows_ += out.size();
    for (std::int32_t v : out) ++indeg_[static_cast<std::size_t>(v)];
  }
}

EdgeLattice build_lattice(const Graph& graph, const VertexOrder& order) {
  const Index n = graph.vertex_count();
  if (order.size() != n) throw std::invalid_argument("order size does not match graph");

  std::vector<EdgeLattice::Node> nodes;
  nodes.reserve(graph.edge_count());
  for (const GraphEdge& e : graph.edges()) {
    Index a = order.position_of(e.u), b = order.position_of(e.v);
    if (a > b) std::swap(a, b);
    nodes.push_back({{a, b}, e.w});
  }
  std::sort(nodes.begin(), nodes.end(), [](const auto& x, const auto& y) {
    return std::pair(x.pos.row, x.pos.col) < std::pair(y.pos.row, y.pos.col);
  });

  // Per-row column lists (ascending) for the dominance scans.
  std::vector<std::vector<std::pair<Index, std::int32_t>>> rows(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    rows[static_cast<std::size_t>(nodes[i].pos.row)].emplace_back(nodes[i].pos.col,
                                                                  static_cast<std::int32_t>(i));

  // successors(p) = minimal edges dominating p away from the diagonal
  // (row <= p.row, col >= p.col). Scanning rows upward with a shrinking
  // column cap enumerates exactly the witness-free pairs.
  std::vector<std::vector<std::int32_t>> succ(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Index r = nodes[i].pos.row, c = nodes[i].pos.col;
    Index ccap = n + 1;
    const auto& same = rows[static_cast<std::size_t>(r)];
    auto it = std::upper_bound(same.begin(), same.end(), std::pair(c, std::numeric_limits<std::int32_t>::max()));
    if (it != same.end()) {
      succ[i].push_back(it->second);
      ccap = it->first;
    }
    for (Index rr = r - 1; rr >= 1 && ccap > c; --rr) {
      const auto& above = rows[static_cast<std::size_t>(rr)];
      if (above.empty() || above.back().first < c) continue;
      auto jt = std::lower_bound(above.begin(), above.end(), std::pair(c, std::numeric_limits<std::int32_t>::min()));
      if (jt != above.end() && jt->first < ccap) {
        succ[i].push_back(jt->second);
        ccap = jt->first;
      }
    }
  }
  return EdgeLattice(n, std::move(nodes), std::move(succ));
}

std::vector<std::int32_t> sparse_find_order(const EdgeLattice& lattice,
                                            std::span<const double> weights) {
  if (weights.size() != lattice.node_count())
    throw std::invalid_argument("one weight per lattice node required");
  for (double w : weights)
    if (std::isnan(w)) throw std::invalid_argument("edge weight is NaN");
  return traverse(
      lattice, [](std::int32_t) { return Index{0}; },
      [&](std::int32_t i) { return weights[static_cast<std::size_t>(i)]; });
}

std::vector<Count> encapsulated_nonedges(std::span<const std::int32_t> edge_seq,
                                         const EdgeLattice& lattice) {
  FrontierTracker frontier;
  std::vector<Count> out;
  out.reserve(edge_seq.size());
  for (std::int32_t id : edge_seq)
    out.push_back(frontier.add(lattice.node(static_cast<std::size_t>(id)).pos) - 1);
  return out;
}

HeuristicResult sparse_heuristic_borders(const Graph& graph, const VertexOrder& order,
                                         const HeuristicParams& params,
                                         SparseIterationObserver* observer) {
  const Index n = graph.vertex_count();
  if (n < 2) throw std::invalid_argument("graph has no entries to segment");
  if (params.stall_window < 1 || params.max_iters < 1)
    throw std::invalid_argument("stall_window and max_iters must be positive");
  const Count active_area = static_cast<Count>(n) * (n - 1) / 2;

  const EdgeLattice lattice = build_lattice(graph, order);
  const std::size_t m = lattice.node_count();

  HeuristicResult res;
  std::vector<std::int32_t> seq;
  SparseSweep cur;
  std::vector<std::int32_t> best_seq;
  SparseSweep best;

  auto pos_key = [&](std::int32_t i) {
    const Entry p = lattice.node(static_cast<std::size_t>(i)).pos;
    return (static_cast<std::uint64_t>(p.row) << 32) | static_cast<std::uint32_t>(p.col);
  };

  auto emit = [&](TieKind kind) {
    if (!observer) return;
    SparseIterationInfo info;
    info.iter = res.total_iters;
    info.kind = kind;
    info.chain_score = cur.score;
    info.chain_length = cur.blocks.size();
    BorderChain chain;
    EntryOrder ord;
    if (observer->want_chains()) {
      chain = materialize_chain(seq, cur, lattice, active_area);
      info.chain = &chain;
    }
    if (observer->want_orders()) {
      ord = induced_order(seq, lattice, active_area);
      info.order = &ord;
    }
    observer->on_iteration(info);
  };

  auto note_best = [&](bool force) {
    if (force || cur.score > best.score) {
      best = cur;
      best_seq = seq;
    }
  };

  std::vector<Index> pos_in_seq(m, 0);
  auto apply_step = [&](TieKind kind, std::uint64_t salt) {
    for (std::size_t i = 0; i < seq.size(); ++i)
      pos_in_seq[static_cast<std::size_t>(seq[i])] = static_cast<Index>(i);
    auto rank = [&](std::int32_t i) { return cur.rank_of_node[static_cast<std::size_t>(i)]; };
    auto tie = [&](std::int32_t i) {
      return kind == TieKind::Flip
                 ? static_cast<double>(pos_in_seq[static_cast<std::size_t>(i)])
                 : unit_double(hash_combine(hash_combine(params.seed, salt), pos_key(i)));
    };
    std::vector<std::int32_t> next = traverse(lattice, rank, tie);
    SparseSweep swept = sweep_edges(next, lattice, active_area, params.model);
    ++res.total_iters;
    if (kind == TieKind::Flip)
      ++res.flip_iters;
    else
      ++res.random_iters;
    const bool changed = !swept.same_chain(cur);
    if (changed && detail::compare_alpha(cur.blocks, swept.blocks) >= 0)
      throw std::logic_error("border progress vector failed to increase");
    seq = std::move(next);
    cur = std::move(swept);
    note_best(false);
    emit(kind);
    return changed;
  };

  // Initial random monotonic order over the edges.
  {
    const std::uint64_t s0 = hash_combine(params.seed, 0);
    seq = traverse(
        lattice, [](std::int32_t) { return Index{0}; },
        [&](std::int32_t i) { return unit_double(hash_combine(s0, pos_key(i))); });
    cur = sweep_edges(seq, lattice, active_area, params.model);
    res.total_iters = 1;
    res.random_iters = 1;
    note_best(true);
    emit(TieKind::Random);
  }

  int stall = 0;
  while (res.total_iters < params.max_iters && stall < params.stall_window) {
    bool changed_since_random = false;
    std::vector<std::int32_t> prev1 = seq, prev2;
    bool prev2_set = false;
    int inner = 0;
    bool budget_hit = false;
    while (true) {
      if (res.total_iters >= params.max_iters) {
        budget_hit = true;
        break;
      }
      changed_since_random |= apply_step(TieKind::Flip, 0);
      ++inner;
      const bool cycle = seq == prev1 || (prev2_set && seq == prev2);
      prev2 = std::move(prev1);
      prev2_set = true;
      prev1 = seq;
      if (cycle) break;
      if (params.force_random_every > 0 && inner >= params.force_random_every) break;
    }
    if (budget_hit || res.total_iters >= params.max_iters) break;

    changed_since_random |=
        apply_step(TieKind::Random, static_cast<std::uint64_t>(res.total_iters) + 1);
    if (changed_since_random)
      stall = 0;
    else
      ++stall;
  }

  res.converged = stall >= params.stall_window;
  res.best_score = best.score;
  res.chain = materialize_chain(best_seq, best, lattice, active_area);
  return res;
}

}  // namespace bandseg
