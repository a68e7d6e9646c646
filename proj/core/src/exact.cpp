#include "bandseg/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace bandseg {

namespace {

constexpr std::size_t kDenseEntryLimit = 50'000'000;

// Region between two nested staircases, manipulated through per-row end
// columns. All arithmetic runs on residuals r(e) = D(e)*n - s scaled by the
// region count, so that "densest cut" comparisons are exact sums of integers
// whenever the data is integral.
struct Region {
  Staircase lo, hi;
};

class IsotonicSolver {
 public:
  IsotonicSolver(const ValueGrid& grid, IsotonicFit& fit) : grid_(grid), fit_(fit) {}

  void solve(const Region& region) {
    const SegmentStats stats = grid_.stats_between(region.lo, region.hi);
    if (stats.count == 0) return;
    const double mu = stats.sum / static_cast<double>(stats.count);

    Staircase cut = best_cut(region, stats);
    if (cut == region.lo || cut == region.hi) {
      assign_level(region, mu);
      return;
    }
    solve({region.lo, cut});
    solve({cut, region.hi});
  }

 private:
  void assign_level(const Region& region, double mu) {
    const DomainKind kind = grid_.kind();
    for (Index r = 1; r <= grid_.rows(); ++r) {
      const Index from = region.lo.end_col(kind, r) + 1;
      const Index to = region.hi.end_col(kind, r);
      for (Index c = from; c <= to; ++c) fit_.value(r, c) = mu;
    }
  }

  // Corner W between lo and hi maximizing the summed residual of W \ lo,
  // preferring the largest maximizer. Returns lo when no cut has a strictly
  // positive residual sum (the region is one level).
  Staircase best_cut(const Region& region, const SegmentStats& stats) {
    const DomainKind kind = grid_.kind();
    const Index rows = grid_.rows();
    const double n = static_cast<double>(stats.count);
    const double s = stats.sum;

    // Positive-split threshold: exact zero for integral data, a relative
    // guard against roundoff for real data.
    double eps = 0.0;
    if (!grid_.integral_values()) {
      double mag = 0.0;
      for (Index r = 1; r <= rows; ++r) {
        const Index from = region.lo.end_col(kind, r) + 1;
        const Index to = region.hi.end_col(kind, r);
        for (Index c = from; c <= to; ++c) mag += std::abs(grid_.value(r, c) * n - s);
      }
      eps = 1e-12 * std::max(1.0, mag);
    }

    // F[r][e - loE(r)] = best cut value over rows <= r ending at column e.
    std::vector<std::vector<double>> F(static_cast<std::size_t>(rows));
    std::vector<Index> loE(static_cast<std::size_t>(rows)), hiE(static_cast<std::size_t>(rows));

    for (Index r = 1; r <= rows; ++r) {
      const std::size_t ri = static_cast<std::size_t>(r - 1);
      loE[ri] = region.lo.end_col(kind, r);
      hiE[ri] = region.hi.end_col(kind, r);
      const Index span = hiE[ri] - loE[ri];
      auto& row = F[ri];
      row.assign(static_cast<std::size_t>(span) + 1, 0.0);

      // Cumulative residual of taking columns (loE, e] in this row.
      double acc = 0.0;
      for (Index k = 1; k <= span; ++k) {
        acc += grid_.value(r, loE[ri] + k) * n - s;
        row[static_cast<std::size_t>(k)] = acc;
      }
      if (r == 1) continue;

      const std::size_t pi = ri - 1;
      const Index pspan = hiE[pi] - loE[pi];
      if (kind == DomainKind::Rectangle) {
        // e_{r-1} >= e_r: combine with suffix maxima of the previous row.
        std::vector<double> suffix(static_cast<std::size_t>(pspan) + 1);
        double best = -std::numeric_limits<double>::infinity();
        for (Index k = pspan; k >= 0; --k) {
          best = std::max(best, F[pi][static_cast<std::size_t>(k)]);
          suffix[static_cast<std::size_t>(k)] = best;
        }
        for (Index k = 0; k <= span; ++k) {
          const Index e = loE[ri] + k;
          const Index kp = std::max<Index>(0, e - loE[pi]);
          row[static_cast<std::size_t>(k)] += suffix[static_cast<std::size_t>(kp)];
        }
      } else {
        // Triangle: e_{r-1} <= e_r: prefix maxima.
        std::vector<double> prefix(static_cast<std::size_t>(pspan) + 1);
        double best = -std::numeric_limits<double>::infinity();
        for (Index k = 0; k <= pspan; ++k) {
          best = std::max(best, F[pi][static_cast<std::size_t>(k)]);
          prefix[static_cast<std::size_t>(k)] = best;
        }
        for (Index k = 0; k <= span; ++k) {
          const Index e = loE[ri] + k;
          const Index kp = std::min<Index>(pspan, e - loE[pi]);
          if (kp < 0) {
            row[static_cast<std::size_t>(k)] = -std::numeric_limits<double>::infinity();
            continue;
          }
          row[static_cast<std::size_t>(k)] += prefix[static_cast<std::size_t>(kp)];
        }
      }
    }

    // Reconstruct from the last row, preferring larger end columns on ties.
    const std::size_t last = static_cast<std::size_t>(rows - 1);
    Index pick = loE[last];
    double best = F[last][0];
    for (Index k = 1; k <= hiE[last] - loE[last]; ++k) {
      if (F[last][static_cast<std::size_t>(k)] >= best) {
        best = F[last][static_cast<std::size_t>(k)];
        pick = loE[last] + k;
      }
    }
    if (!(best > eps)) return region.lo;

    std::vector<Index> ends(static_cast<std::size_t>(rows));
    ends[last] = pick;
    for (Index r = rows - 1; r >= 1; --r) {
      const std::size_t ri = static_cast<std::size_t>(r - 1);
      const Index below = ends[ri + 1];
      // Row r must dominate (rectangle) or stay inside (triangle) row r+1's
      // choice; take the largest end achieving the remaining optimum.
      Index from = loE[ri], to = hiE[ri];
      if (kind == DomainKind::Rectangle)
        from = std::max(from, below);
      else
        to = std::min(to, below);
      double want = -std::numeric_limits<double>::infinity();
      Index arg = from;
      for (Index e = from; e <= to; ++e) {
        const double v = F[ri][static_cast<std::size_t>(e - loE[ri])];
        if (v >= want) {
          want = v;
          arg = e;
        }
      }
      ends[ri] = arg;
    }

    std::vector<Index> widths(static_cast<std::size_t>(rows));
    for (Index r = 1; r <= rows; ++r) {
      const Index start = kind == DomainKind::UpperTriangle ? r : 0;
      widths[static_cast<std::size_t>(r - 1)] = ends[static_cast<std::size_t>(r - 1)] - start;
    }
    return Staircase(std::move(widths));
  }

  const ValueGrid& grid_;
  IsotonicFit& fit_;
};

// Smallest corner containing every non-zero active entry.
Staircase support_corner(const ValueGrid& grid) {
  const Index rows = grid.rows();
  std::vector<Index> ends(static_cast<std::size_t>(rows));
  if (grid.kind() == DomainKind::Rectangle) {
    Index running = 0;
    for (Index r = rows; r >= 1; --r) {
      Index last = 0;
      for (Index c = grid.active_begin_col(r); c <= grid.cols(); ++c)
        if (grid.value(r, c) != 0.0) last = c;
      running = std::max(running, last);
      ends[static_cast<std::size_t>(r - 1)] = running;
    }
    for (Index r = 1; r <= rows; ++r) {
      const Index base_end = grid.base().end_col(grid.kind(), r);
      ends[static_cast<std::size_t>(r - 1)] =
          std::max(ends[static_cast<std::size_t>(r - 1)], base_end);
    }
    std::vector<Index> widths(ends.begin(), ends.end());
    return Staircase(std::move(widths));
  }
  Index running = 0;
  for (Index r = 1; r <= rows; ++r) {
    Index last = 0;
    for (Index c = grid.active_begin_col(r); c <= grid.cols(); ++c)
      if (grid.value(r, c) != 0.0) last = c;
    running = std::max({running, last, grid.base().end_col(grid.kind(), r)});
    running = std::max(running, r);  // triangle ends never precede the row
    ends[static_cast<std::size_t>(r - 1)] = running;
  }
  std::vector<Index> widths(static_cast<std::size_t>(rows));
  for (Index r = 1; r <= rows; ++r)
    widths[static_cast<std::size_t>(r - 1)] = ends[static_cast<std::size_t>(r - 1)] - r;
  return Staircase(std::move(widths));
}

}  // namespace

bool IsotonicFit::monotone(const ValueGrid& grid) const {
  // The fit may not increase along either direction away from the base.
  for (Index r = 1; r <= grid.rows(); ++r)
    for (Index c = grid.active_begin_col(r); c <= grid.cols(); ++c) {
      const Entry right{r, c + 1};
      if (grid.active(right) && value(r, c) < value(r, c + 1)) return false;
      const Entry away = grid.kind() == DomainKind::Rectangle ? Entry{r + 1, c} : Entry{r - 1, c};
      if (grid.active(away) && value(r, c) < value(away.row, away.col)) return false;
    }
  return true;
}

IsotonicFit grid_isotonic(const ValueGrid& grid, const IsotonicOptions& opts) {
  const std::size_t cells = static_cast<std::size_t>(grid.rows()) * grid.cols();
  if (cells > kDenseEntryLimit)
    throw std::runtime_error("dense mode requires O(NM) memory; instance too large");

  IsotonicFit fit;
  fit.rows = grid.rows();
  fit.cols = grid.cols();
  fit.values.assign(cells, 0.0);

  IsotonicSolver solver(grid, fit);
  const Staircase outer = opts.shrink_to_support ? support_corner(grid) : grid.full();
  solver.solve({grid.base(), outer});
  // Entries outside the support corner stay at the zero level.
  return fit;
}

BorderChain borders_from_fit(const IsotonicFit& fit, const ValueGrid& grid) {
  // Distinct fitted values, descending. Levels with equal rational density
  // collapse to the same double, so exact equality groups them correctly.
  std::map<double, std::vector<Entry>, std::greater<double>> levels;
  for (Index r = 1; r <= grid.rows(); ++r)
    for (Index c = grid.active_begin_col(r); c <= grid.cols(); ++c)
      levels[fit.value(r, c)].push_back({r, c});

  BorderChain chain(grid.base());
  Staircase cur = grid.base();
  const DomainKind kind = grid.kind();
  for (auto& [value, entries] : levels) {
    (void)value;
    Staircase next = cur;
    for (const Entry& e : entries) {
      const Index start = kind == DomainKind::UpperTriangle ? e.row : 0;
      const Index w = e.col - start;
      if (w > next.width(e.row)) next.set_width(e.row, w);
    }
    if (!validate_staircase(next, grid))
      throw std::invalid_argument("fit violates the monotonicity invariant");
    chain.append(grid.stats_between(cur, next), next);
    cur = next;
  }
  return chain;
}

BorderChain exact_borders(const ValueGrid& grid, const IsotonicOptions& opts) {
  return borders_from_fit(grid_isotonic(grid, opts), grid);
}

std::vector<Staircase> enumerate_corners(const ValueGrid& grid, std::size_t limit) {
  std::vector<Staircase> out;
  const Index rows = grid.rows();
  std::vector<Index> ends(static_cast<std::size_t>(rows));
  const DomainKind kind = grid.kind();

  std::function<void(Index, Index)> rec = [&](Index r, Index bound) {
    if (r > rows) {
      std::vector<Index> widths(static_cast<std::size_t>(rows));
      for (Index i = 1; i <= rows; ++i) {
        const Index start = kind == DomainKind::UpperTriangle ? i : 0;
        widths[static_cast<std::size_t>(i - 1)] = ends[static_cast<std::size_t>(i - 1)] - start;
      }
      if (out.size() >= limit) throw std::runtime_error("instance too large: corner count over limit");
      out.emplace_back(std::move(widths));
      return;
    }
    const Index base_end = grid.base().end_col(kind, r);
    Index from, to;
    if (kind == DomainKind::Rectangle) {
      from = base_end;
      to = std::min(grid.cols(), bound);
      for (Index e = to; e >= from; --e) {
        // Rows below may not extend past e.
        ends[static_cast<std::size_t>(r - 1)] = e;
        rec(r + 1, e);
      }
    } else {
      from = std::max({base_end, bound, r});
      to = grid.cols();
      for (Index e = from; e <= to; ++e) {
        ends[static_cast<std::size_t>(r - 1)] = e;
        rec(r + 1, e);
      }
    }
  };
  rec(1, kind == DomainKind::Rectangle ? grid.cols() : 0);

  std::sort(out.begin(), out.end(), [](const Staircase& a, const Staircase& b) {
    const Count aa = a.area(), ba = b.area();
    if (aa != ba) return aa < ba;
    return a.widths() < b.widths();
  });
  return out;
}

BorderChain brute_force_borders(const ValueGrid& grid) {
  const std::vector<Staircase> corners = enumerate_corners(grid);
  std::vector<SegmentStats> stats;
  stats.reserve(corners.size());
  for (const Staircase& s : corners) stats.push_back(grid.stats_between(grid.base(), s));

  std::vector<Staircase> borders;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Staircase& u = corners[i];
    bool has_inner = false, has_outer = false;
    SegmentStats inner_best, outer_best;  // min freq(U\X), max freq(Y\U)
    for (std::size_t j = 0; j < corners.size(); ++j) {
      if (j == i) continue;
      const Staircase& v = corners[j];
      if (u.contains(v) && v != u) {
        const SegmentStats d = stats[i] - stats[j];
        if (!has_inner || compare_density(d, inner_best) < 0) inner_best = d;
        has_inner = true;
      } else if (v.contains(u) && v != u) {
        const SegmentStats d = stats[j] - stats[i];
        if (!has_outer || compare_density(d, outer_best) > 0) outer_best = d;
        has_outer = true;
      }
    }
    const bool is_border =
        !has_inner || !has_outer || compare_density(outer_best, inner_best) < 0;
    if (is_border) borders.push_back(u);
  }

  // Survivors are already area-sorted; they must chain by inclusion.
  BorderChain chain(grid.base());
  for (std::size_t i = 1; i < borders.size(); ++i) {
    if (!borders[i].contains(borders[i - 1]))
      throw std::logic_error("border set is not totally ordered by inclusion");
    chain.append(grid.stats_between(borders[i - 1], borders[i]), borders[i]);
  }
  return chain;
}

}  // namespace bandseg
