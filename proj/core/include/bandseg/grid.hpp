#pragma once
// Grid domains, staircase corners, and additive segment statistics.

#include <cstdint>
#include <vector>

namespace bandseg {

using Index = std::int32_t;
using Count = std::int64_t;

struct Entry {
  Index row = 0;  // 1-based
  Index col = 0;
  friend bool operator==(const Entry&, const Entry&) = default;
};

enum class DomainKind { Rectangle, UpperTriangle };

/// Per-row count of covered in-domain columns, counted outward from the
/// domain's base side: rectangle rows cover columns 1..w[r], triangle rows
/// cover r+1..r+w[r].
class Staircase {
 public:
  Staircase() = default;
  explicit Staircase(std::vector<Index> widths) : widths_(std::move(widths)) {}
  static Staircase zeros(Index rows) {
    return Staircase(std::vector<Index>(static_cast<std::size_t>(rows), 0));
  }

  Index rows() const { return static_cast<Index>(widths_.size()); }
  Index width(Index row) const { return widths_[static_cast<std::size_t>(row - 1)]; }
  void set_width(Index row, Index w) { widths_[static_cast<std::size_t>(row - 1)] = w; }
  const std::vector<Index>& widths() const { return widths_; }

  /// Last covered column of `row`; one left of the row's first in-domain
  /// column when the row is uncovered.
  Index end_col(DomainKind kind, Index row) const {
    const Index start = kind == DomainKind::UpperTriangle ? row : 0;
    return start + width(row);
  }

  Count area() const {
    Count a = 0;
    for (Index w : widths_) a += w;
    return a;
  }

  bool contains(const Staircase& inner) const {
    if (inner.widths_.size() != widths_.size()) return false;
    for (std::size_t r = 0; r < widths_.size(); ++r)
      if (widths_[r] < inner.widths_[r]) return false;
    return true;
  }

  bool covers(DomainKind kind, Entry e) const {
    return e.col <= end_col(kind, e.row);
  }

  friend bool operator==(const Staircase&, const Staircase&) = default;

 private:
  std::vector<Index> widths_;
};

/// True when the widths encode a corner of the given domain: non-increasing
/// widths for rectangles, non-decreasing band-end columns for triangles.
bool staircase_valid(DomainKind kind, Index rows, Index cols, const Staircase& s);

struct SegmentStats {
  Count count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  SegmentStats& operator+=(const SegmentStats& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
  SegmentStats& operator-=(const SegmentStats& o) {
    count -= o.count;
    sum -= o.sum;
    sum_sq -= o.sum_sq;
    return *this;
  }
  friend SegmentStats operator+(SegmentStats a, const SegmentStats& b) { return a += b; }
  friend SegmentStats operator-(SegmentStats a, const SegmentStats& b) { return a -= b; }
  friend bool operator==(const SegmentStats&, const SegmentStats&) = default;

  void add_value(double v) {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
};

/// Dense value matrix over a masked domain with a base corner. Entries inside
/// the base are excluded from every order, segment, and statistic.
class ValueGrid {
 public:
  static ValueGrid rectangle(Index rows, Index cols, std::vector<double> values,
                             Staircase base = {});
  /// `values` is a full n-by-n row-major matrix; only the strict upper
  /// triangle is read.
  static ValueGrid upper_triangle(Index n, std::vector<double> values, Staircase base = {});

  DomainKind kind() const { return kind_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  double value(Index r, Index c) const {
    return values_[static_cast<std::size_t>(r - 1) * cols_ + (c - 1)];
  }
  double value(Entry e) const { return value(e.row, e.col); }

  /// First in-domain column of a row (1-based); rows() may map to cols_+1 for
  /// the final triangle row.
  Index domain_begin_col(Index r) const {
    return kind_ == DomainKind::UpperTriangle ? r + 1 : 1;
  }
  Index domain_width(Index r) const {
    return kind_ == DomainKind::UpperTriangle ? cols_ - r : cols_;
  }
  bool in_domain(Index r, Index c) const {
    return r >= 1 && r <= rows_ && c >= domain_begin_col(r) && c <= cols_;
  }
  bool in_base(Entry e) const { return base_.covers(kind_, e); }
  bool active(Entry e) const { return in_domain(e.row, e.col) && !in_base(e); }
  Index active_begin_col(Index r) const { return base_.end_col(kind_, r) + 1; }

  const Staircase& base() const { return base_; }
  Staircase full() const;
  Count active_area() const;
  std::vector<Entry> active_entries() const;  // row asc, col asc
  SegmentStats stats_between(const Staircase& inner, const Staircase& outer) const;

  bool integral_values() const { return integral_; }

 private:
  ValueGrid() = default;
  DomainKind kind_ = DomainKind::Rectangle;
  Index rows_ = 0, cols_ = 0;
  std::vector<double> values_;
  Staircase base_;
  bool integral_ = false;
};

/// True iff `s` is a corner of the grid's domain and contains the grid base.
bool validate_staircase(const Staircase& s, const ValueGrid& grid);

}  // namespace bandseg
