#include "bandseg/heuristic.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

#include "bandseg/rng.hpp"
#include "pava_detail.hpp"

namespace bandseg {

namespace {

// Pop order: smallest rank (densest segment first), then largest tie key,
// then smallest flat index so equal keys stay deterministic.
struct HeapItem {
  Index rank;
  double tie;
  Index flat;
};
struct HeapLess {
  bool operator()(const HeapItem& a, const HeapItem& b) const {
    if (a.rank != b.rank) return a.rank > b.rank;
    if (a.tie != b.tie) return a.tie < b.tie;
    return a.flat > b.flat;
  }
};

class Traversal {
 public:
  explicit Traversal(const ValueGrid& grid)
      : grid_(grid), rows_(grid.rows()), cols_(grid.cols()) {}

  Index flat(Entry e) const { return (e.row - 1) * cols_ + (e.col - 1); }

  template <class RankFn, class TieFn>
  EntryOrder run(RankFn rank, TieFn tie) const {
    const std::size_t cells = static_cast<std::size_t>(rows_) * cols_;
    std::vector<signed char> deps(cells, -1);
    std::priority_queue<HeapItem, std::vector<HeapItem>, HeapLess> heap;

    for (Index r = 1; r <= rows_; ++r)
      for (Index c = grid_.active_begin_col(r); c <= cols_; ++c) {
        const Entry e{r, c};
        signed char d = 0;
        for (const Entry& t : toward_base(e))
          if (grid_.active(t)) ++d;
        deps[static_cast<std::size_t>(flat(e))] = d;
        if (d == 0) {
          const Index f = flat(e);
          heap.push({rank(f), tie(f), f});
        }
      }

    EntryOrder order;
    order.seq.reserve(static_cast<std::size_t>(grid_.active_area()));
    while (!heap.empty()) {
      const HeapItem top = heap.top();
      heap.pop();
      const Entry e{top.flat / cols_ + 1, top.flat % cols_ + 1};
      order.seq.push_back(e);
      for (const Entry& o : outward(e)) {
        if (!grid_.active(o)) continue;
        const std::size_t f = static_cast<std::size_t>(flat(o));
        if (--deps[f] == 0) heap.push({rank(static_cast<Index>(f)), tie(static_cast<Index>(f)),
                                       static_cast<Index>(f)});
      }
    }
    return order;
  }

 private:
  std::array<Entry, 2> toward_base(Entry e) const {
    if (grid_.kind() == DomainKind::Rectangle)
      return {Entry{e.row - 1, e.col}, Entry{e.row, e.col - 1}};
    return {Entry{e.row + 1, e.col}, Entry{e.row, e.col - 1}};
  }
  std::array<Entry, 2> outward(Entry e) const {
    if (grid_.kind() == DomainKind::Rectangle)
      return {Entry{e.row + 1, e.col}, Entry{e.row, e.col + 1}};
    return {Entry{e.row - 1, e.col}, Entry{e.row, e.col + 1}};
  }

  const ValueGrid& grid_;
  Index rows_, cols_;
};

struct OrderSweep {
  BorderChain chain;
  std::vector<Index> block_of_pos;
};

OrderSweep sweep_order(const EntryOrder& order, const ValueGrid& grid) {
  std::vector<detail::PavaBlock> stack;
  for (std::size_t pos = 0; pos < order.seq.size(); ++pos) {
    SegmentStats s;
    s.add_value(grid.value(order.seq[pos]));
    std::size_t end = pos + 1;
    while (!stack.empty() && compare_density(stack.back().stats, s) <= 0) {
      s += stack.back().stats;
      stack.pop_back();
    }
    stack.push_back({s, end});
  }

  OrderSweep out{BorderChain(grid.base()), std::vector<Index>(order.seq.size(), 0)};
  Staircase cur = grid.base();
  std::size_t pos = 0;
  for (std::size_t b = 0; b < stack.size(); ++b) {
    Staircase next = cur;
    for (; pos < stack[b].end; ++pos) {
      const Entry e = order.seq[pos];
      const Index start = grid.kind() == DomainKind::UpperTriangle ? e.row : 0;
      next.set_width(e.row, e.col - start);
      out.block_of_pos[pos] = static_cast<Index>(b);
    }
    out.chain.append(grid.stats_between(cur, next), next);
    cur = next;
  }
  return out;
}

std::vector<SegmentStats> block_stats(const BorderChain& chain) {
  std::vector<SegmentStats> out;
  out.reserve(chain.size());
  for (const ChainSegment& s : chain.segments()) out.push_back(s.stats);
  return out;
}

}  // namespace

bool EntryOrder::monotonic(const ValueGrid& grid) const {
  if (static_cast<Count>(seq.size()) != grid.active_area()) return false;
  const std::size_t cells = static_cast<std::size_t>(grid.rows()) * grid.cols();
  std::vector<char> seen(cells, 0);
  const Index cols = grid.cols();
  auto flat = [cols](Entry e) { return static_cast<std::size_t>(e.row - 1) * cols + (e.col - 1); };
  for (const Entry& e : seq) {
    if (!grid.active(e) || seen[flat(e)]) return false;
    const Entry a = grid.kind() == DomainKind::Rectangle ? Entry{e.row - 1, e.col}
                                                         : Entry{e.row + 1, e.col};
    const Entry b{e.row, e.col - 1};
    if (grid.active(a) && !seen[flat(a)]) return false;
    if (grid.active(b) && !seen[flat(b)]) return false;
    seen[flat(e)] = 1;
  }
  return true;
}

EntryOrder random_monotonic_order(const ValueGrid& grid, std::uint64_t seed) {
  Traversal t(grid);
  return t.run([](Index) { return Index{0}; },
               [seed](Index f) { return unit_double(hash_combine(seed, static_cast<std::uint64_t>(f))); });
}

EntryOrder find_order(const ValueGrid& grid, std::span<const double> weights) {
  const std::size_t cells = static_cast<std::size_t>(grid.rows()) * grid.cols();
  if (weights.size() != cells)
    throw std::invalid_argument("weights must cover the full rows x cols layout");
  Traversal t(grid);
  for (Index r = 1; r <= grid.rows(); ++r)
    for (Index c = grid.active_begin_col(r); c <= grid.cols(); ++c)
      if (std::isnan(weights[static_cast<std::size_t>(t.flat({r, c}))]))
        throw std::invalid_argument("entry weight is NaN");
  return t.run([](Index) { return Index{0}; }, [&](Index f) { return weights[static_cast<std::size_t>(f)]; });
}

BorderChain borders_of_order(const EntryOrder& order, const ValueGrid& grid) {
  return sweep_order(order, grid).chain;
}

HeuristicResult heuristic_borders(const ValueGrid& grid, const HeuristicParams& params,
                                  IterationObserver* observer) {
  if (grid.active_area() == 0) throw std::invalid_argument("grid has no active entries");
  if (params.stall_window < 1 || params.max_iters < 1)
    throw std::invalid_argument("stall_window and max_iters must be positive");

  Traversal trav(grid);
  const std::size_t cells = static_cast<std::size_t>(grid.rows()) * grid.cols();

  HeuristicResult res;
  EntryOrder cur_order;
  OrderSweep cur;

  auto emit = [&](TieKind kind, double score) {
    if (!observer) return;
    IterationInfo info;
    info.iter = res.total_iters;
    info.kind = kind;
    info.chain_score = score;
    info.chain_length = cur.chain.size();
    if (observer->want_chains()) info.chain = &cur.chain;
    if (observer->want_orders()) info.order = &cur_order;
    observer->on_iteration(info);
  };

  double best_score = 0.0;
  auto note_best = [&](double score) {
    if (res.chain.empty() || score > best_score) {
      res.chain = cur.chain;
      best_score = score;
    }
  };

  // Step: build a new order from the current chain's segment ranks plus a
  // tie key, sweep its borders, and assert the lexicographic progress of the
  // convergence argument.
  std::vector<Index> rank(cells, 0);
  auto apply_step = [&](TieKind kind, std::uint64_t salt) {
    std::fill(rank.begin(), rank.end(), 0);
    std::vector<double> tie(cells, 0.0);
    for (std::size_t pos = 0; pos < cur_order.seq.size(); ++pos) {
      const Index f = trav.flat(cur_order.seq[pos]);
      rank[static_cast<std::size_t>(f)] = cur.block_of_pos[pos];
      tie[static_cast<std::size_t>(f)] =
          kind == TieKind::Flip
              ? static_cast<double>(pos)
              : unit_double(hash_combine(hash_combine(params.seed, salt), static_cast<std::uint64_t>(f)));
    }
    EntryOrder next = trav.run([&](Index f) { return rank[static_cast<std::size_t>(f)]; },
                               [&](Index f) { return tie[static_cast<std::size_t>(f)]; });
    OrderSweep swept = sweep_order(next, grid);
    ++res.total_iters;
    if (kind == TieKind::Flip)
      ++res.flip_iters;
    else
      ++res.random_iters;

    const bool changed = !(swept.chain == cur.chain);
    if (changed &&
        detail::compare_alpha(block_stats(cur.chain), block_stats(swept.chain)) >= 0)
      throw std::logic_error("border progress vector failed to increase");

    cur_order = std::move(next);
    cur = std::move(swept);
    const double score = cur.chain.total_score(params.model);
    note_best(score);
    emit(kind, score);
    return changed;
  };

  // Start from a single border: a random tie-breaker over uniform weights.
  cur_order = random_monotonic_order(grid, hash_combine(params.seed, 0));
  cur = sweep_order(cur_order, grid);
  res.total_iters = 1;
  res.random_iters = 1;
  note_best(cur.chain.total_score(params.model));
  emit(TieKind::Random, best_score);

  int stall = 0;
  while (res.total_iters < params.max_iters && stall < params.stall_window) {
    bool changed_since_random = false;

    // Flip until the order two steps back repeats (Prop-7 cycle) or a forced
    // random injection is due.
    EntryOrder prev1 = cur_order;
    EntryOrder prev2;
    int inner = 0;
    bool budget_hit = false;
    while (true) {
      if (res.total_iters >= params.max_iters) {
        budget_hit = true;
        break;
      }
      changed_since_random |= apply_step(TieKind::Flip, 0);
      ++inner;
      const bool cycle =
          cur_order == prev1 || (!prev2.seq.empty() && cur_order == prev2);
      prev2 = std::move(prev1);
      prev1 = cur_order;
      if (cycle) break;
      if (params.force_random_every > 0 && inner >= params.force_random_every) break;
    }
    if (budget_hit) break;
    if (res.total_iters >= params.max_iters) break;

    changed_since_random |= apply_step(TieKind::Random, static_cast<std::uint64_t>(res.total_iters) + 1);
    if (changed_since_random)
      stall = 0;
    else
      ++stall;
  }

  res.converged = stall >= params.stall_window;
  res.best_score = best_score;
  return res;
}

}  // namespace bandseg
