#include "bandseg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bandseg {

namespace {

using nlohmann::json;

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '\t' || ch == ' ' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e && std::isfinite(out);
}

bool parse_index(const std::string& s, Index& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

json staircase_to_json(const Staircase& s, const std::string& domain) {
  json arr = json::array();
  const DomainKind kind =
      domain == "triangle" ? DomainKind::UpperTriangle : DomainKind::Rectangle;
  for (Index r = 1; r <= s.rows(); ++r)
    arr.push_back(json::array({r, s.end_col(kind, r)}));
  return arr;
}

Staircase staircase_from_json(const json& arr, const std::string& domain) {
  std::vector<Index> widths(arr.size());
  const bool tri = domain == "triangle";
  for (const auto& pair : arr) {
    const Index r = pair.at(0).get<Index>();
    const Index end = pair.at(1).get<Index>();
    widths.at(static_cast<std::size_t>(r - 1)) = end - (tri ? r : 0);
  }
  return Staircase(std::move(widths));
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<GraphEdge> edges;
  std::set<std::pair<Index, Index>> seen;
  Index max_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected 'u v [weight]'");
    Index u, v;
    if (!parse_index(fields[0], u) || !parse_index(fields[1], v))
      throw ParseError(line_no, "vertex ids must be integers");
    if (u < 1 || v < 1) throw ParseError(line_no, "vertex ids are 1-based");
    if (u == v) throw ParseError(line_no, "self-loops are not allowed");
    double w = 1.0;
    if (fields.size() == 3 && !parse_double(fields[2], w))
      throw ParseError(line_no, "weight must be a finite number");
    if (w < 0.0) throw ParseError(line_no, "weight must be non-negative");
    if (w == 0.0) continue;  // explicit non-edge
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw ParseError(line_no, "duplicate edge");
    edges.push_back({u, v, w});
    max_id = std::max({max_id, u, v});
  }
  if (edges.empty()) throw ParseError(line_no, "no edges found");
  return Graph(max_id, std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_edge_list(in);
}

ValueGrid read_dense_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  std::size_t cols = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::string cell;
    std::stringstream ss(line);
    bool ok = true;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      double v;
      if (!parse_double(cell, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first_data) continue;  // header row
      throw ParseError(line_no, "expected comma-separated numbers");
    }
    if (row.empty()) continue;
    if (!values.empty() && row.size() != cols)
      throw ParseError(line_no, "ragged row: expected " + std::to_string(cols) + " columns");
    cols = row.size();
    values.insert(values.end(), row.begin(), row.end());
    first_data = false;
  }
  if (values.empty()) throw ParseError(line_no, "no data rows found");
  const Index rows = static_cast<Index>(values.size() / cols);
  return ValueGrid::rectangle(rows, static_cast<Index>(cols), std::move(values));
}

ValueGrid read_dense_matrix_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_dense_matrix(in);
}

std::string report_to_json(const BandReport& rep) {
  json bands = json::array();
  for (std::size_t i = 0; i < rep.bands.size(); ++i) {
    const BandSummary& b = rep.bands[i];
    bands.push_back({{"band", i + 1},
                     {"empty", b.empty_band},
                     {"count", b.stats.count},
                     {"sum", b.stats.sum},
                     {"sum_sq", b.stats.sum_sq},
                     {"density", b.density},
                     {"score", b.score},
                     {"boundary", staircase_to_json(b.upper, rep.domain)}});
  }
  json j{{"schema_version", rep.schema_version},
         {"domain", rep.domain},
         {"rows", rep.rows},
         {"cols", rep.cols},
         {"order", rep.order},
         {"k", rep.k},
         {"effective_k", rep.effective_k},
         {"total_score", rep.total_score},
         {"bands", bands},
         {"diagnostics",
          {{"converged", rep.diag.converged},
           {"iterations", rep.diag.total_iters},
           {"flip_iterations", rep.diag.flip_iters},
           {"random_iterations", rep.diag.random_iters},
           {"refine_rounds", rep.diag.refine_rounds},
           {"refine_swaps", rep.diag.refine_swaps},
           {"borders", rep.diag.border_count},
           {"mode", rep.diag.mode},
           {"order_source", rep.diag.order_source},
           {"model", rep.diag.model},
           {"sigma2", rep.diag.sigma2},
           {"seed", rep.diag.seed}}}};
  return j.dump(2);
}

void write_report_json(const BandReport& report, std::ostream& out) {
  out << report_to_json(report) << '\n';
}

void write_report_json_file(const BandReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_report_json(report, out);
}

BandReport read_report_json(std::istream& in) {
  json j = json::parse(in);
  BandReport rep;
  rep.schema_version = j.at("schema_version").get<int>();
  rep.domain = j.at("domain").get<std::string>();
  rep.rows = j.at("rows").get<Index>();
  rep.cols = j.at("cols").get<Index>();
  rep.order = j.at("order").get<std::vector<Index>>();
  rep.k = j.at("k").get<int>();
  rep.effective_k = j.at("effective_k").get<int>();
  rep.total_score = j.at("total_score").get<double>();
  for (const auto& bj : j.at("bands")) {
    BandSummary b;
    b.empty_band = bj.at("empty").get<bool>();
    b.stats.count = bj.at("count").get<Count>();
    b.stats.sum = bj.at("sum").get<double>();
    b.stats.sum_sq = bj.at("sum_sq").get<double>();
    b.density = bj.at("density").get<double>();
    b.score = bj.at("score").get<double>();
    b.upper = staircase_from_json(bj.at("boundary"), rep.domain);
    rep.bands.push_back(std::move(b));
  }
  const json& d = j.at("diagnostics");
  rep.diag.converged = d.at("converged").get<bool>();
  rep.diag.total_iters = d.at("iterations").get<long long>();
  rep.diag.flip_iters = d.at("flip_iterations").get<long long>();
  rep.diag.random_iters = d.at("random_iterations").get<long long>();
  rep.diag.refine_rounds = d.at("refine_rounds").get<int>();
  rep.diag.refine_swaps = d.at("refine_swaps").get<long long>();
  rep.diag.border_count = d.at("borders").get<std::size_t>();
  rep.diag.mode = d.at("mode").get<std::string>();
  rep.diag.order_source = d.at("order_source").get<std::string>();
  rep.diag.model = d.at("model").get<std::string>();
  rep.diag.sigma2 = d.at("sigma2").get<double>();
  rep.diag.seed = d.at("seed").get<std::uint64_t>();
  return rep;
}

BandReport read_report_json_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_report_json(in);
}

void write_plot_data(const BandReport& rep, std::ostream& out) {
  const DomainKind kind =
      rep.domain == "triangle" ? DomainKind::UpperTriangle : DomainKind::Rectangle;
  for (std::size_t i = 0; i < rep.bands.size(); ++i) {
    const Staircase& s = rep.bands[i].upper;
    for (Index r = 1; r <= s.rows(); ++r)
      out << (i + 1) << '\t' << r << '\t' << s.end_col(kind, r) << '\n';
  }
}

void write_order(const std::vector<Index>& order, std::ostream& out) {
  for (Index v : order) out << v << '\n';
}

std::vector<Index> read_order(std::istream& in) {
  std::vector<Index> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    Index v;
    const auto fields = split_ws(line);
    if (fields.size() != 1 || !parse_index(fields[0], v))
      throw ParseError(line_no, "expected one vertex id per line");
    out.push_back(v);
  }
  return out;
}

std::vector<Index> read_order_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_order(in);
}

}  // namespace bandseg
