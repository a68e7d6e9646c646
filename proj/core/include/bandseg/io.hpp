#pragma once
// File formats: TSV edge lists, CSV matrices, JSON reports, plot data.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "bandseg/graph.hpp"
#include "bandseg/pipeline.hpp"

namespace bandseg {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
  std::size_t line = 0;
};

/// TSV `u<TAB>v[<TAB>weight]`, 1-based undirected edges. Blank lines and
/// lines starting with '#' are skipped; zero-weight lines are dropped as
/// non-edges; duplicates, self-loops, and negative weights are errors.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

/// CSV of reals with an optional header row.
ValueGrid read_dense_matrix(std::istream& in);
ValueGrid read_dense_matrix_file(const std::string& path);

std::string report_to_json(const BandReport& report);
void write_report_json(const BandReport& report, std::ostream& out);
void write_report_json_file(const BandReport& report, const std::string& path);
BandReport read_report_json(std::istream& in);
BandReport read_report_json_file(const std::string& path);

/// One `band<TAB>row<TAB>end_col` line per band boundary vertex.
void write_plot_data(const BandReport& report, std::ostream& out);

/// Vertex order, one id per line.
void write_order(const std::vector<Index>& order, std::ostream& out);
std::vector<Index> read_order(std::istream& in);
std::vector<Index> read_order_file(const std::string& path);

}  // namespace bandseg
