#include "bandseg/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bandseg {

bool staircase_valid(DomainKind kind, Index rows, Index cols, const Staircase& s) {
  if (s.rows() != rows) return false;
  if (kind == DomainKind::Rectangle) {
    Index prev = cols;
    for (Index r = 1; r <= rows; ++r) {
      const Index w = s.width(r);
      if (w < 0 || w > cols || w > prev) return false;
      prev = w;
    }
    return true;
  }
  // Triangle: widths bounded by the row span, band-end columns non-decreasing.
  Index prev_end = 0;
  for (Index r = 1; r <= rows; ++r) {
    const Index w = s.width(r);
    if (w < 0 || w > cols - r) return false;
    const Index end = r + w;
    if (end < prev_end) return false;
    prev_end = end;
  }
  return true;
}

ValueGrid ValueGrid::rectangle(Index rows, Index cols, std::vector<double> values,
                               Staircase base) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (values.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("value count does not match grid shape");
  if (base.rows() == 0) base = Staircase::zeros(rows);
  ValueGrid g;
  g.kind_ = DomainKind::Rectangle;
  g.rows_ = rows;
  g.cols_ = cols;
  g.values_ = std::move(values);
  g.base_ = std::move(base);
  if (!staircase_valid(g.kind_, rows, cols, g.base_))
    throw std::invalid_argument("base is not a valid corner of the grid");
  g.integral_ = true;
  for (double v : g.values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
    if (v != std::floor(v) || std::abs(v) > 9.007199254740992e15) g.integral_ = false;
  }
  return g;
}

ValueGrid ValueGrid::upper_triangle(Index n, std::vector<double> values, Staircase base) {
  if (n <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (values.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("value count does not match grid shape");
  if (base.rows() == 0) base = Staircase::zeros(n);
  ValueGrid g;
  g.kind_ = DomainKind::UpperTriangle;
  g.rows_ = n;
  g.cols_ = n;
  g.values_ = std::move(values);
  g.base_ = std::move(base);
  if (!staircase_valid(g.kind_, n, n, g.base_))
    throw std::invalid_argument("base is not a valid corner of the grid");
  g.integral_ = true;
  for (Index r = 1; r <= n; ++r)
    for (Index c = r + 1; c <= n; ++c) {
      const double v = g.value(r, c);
      if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
      if (v != std::floor(v) || std::abs(v) > 9.007199254740992e15) g.integral_ = false;
    }
  return g;
}

Staircase ValueGrid::full() const {
  std::vector<Index> w(static_cast<std::size_t>(rows_));
  for (Index r = 1; r <= rows_; ++r)
    w[static_cast<std::size_t>(r - 1)] = domain_width(r);
  return Staircase(std::move(w));
}

Count ValueGrid::active_area() const {
  Count a = 0;
  for (Index r = 1; r <= rows_; ++r) a += domain_width(r) - base_.width(r);
  return a;
}

std::vector<Entry> ValueGrid::active_entries() const {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(active_area()));
  for (Index r = 1; r <= rows_; ++r)
    for (Index c = active_begin_col(r); c <= cols_; ++c) out.push_back({r, c});
  return out;
}

SegmentStats ValueGrid::stats_between(const Staircase& inner, const Staircase& outer) const {
  SegmentStats s;
  double comp = 0.0, comp_sq = 0.0;  // Neumaier compensation
  auto add = [](double& acc, double& c, double v) {
    const double t = acc + v;
    if (std::abs(acc) >= std::abs(v))
      c += (acc - t) + v;
    else
      c += (v - t) + acc;
    acc = t;
  };
  for (Index r = 1; r <= rows_; ++r) {
    const Index from = inner.end_col(kind_, r) + 1;
    const Index to = outer.end_col(kind_, r);
    for (Index c = from; c <= to; ++c) {
      const double v = value(r, c);
      ++s.count;
      add(s.sum, comp, v);
      add(s.sum_sq, comp_sq, v * v);
    }
  }
  s.sum += comp;
  s.sum_sq += comp_sq;
  return s;
}

bool validate_staircase(const Staircase& s, const ValueGrid& grid) {
  return staircase_valid(grid.kind(), grid.rows(), grid.cols(), s) && s.contains(grid.base());
}

}  // namespace bandseg
