#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "emdcor/error.hpp"
#include "emdcor_cli/cli.hpp"

namespace emdcor::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view source) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(std::string(source) + ": empty file");

  CsvTable table;
  for (auto cell : split(lines[0])) {
    auto name = unquote(cell);
    if (name.empty()) throw Error(std::string(source) + ": empty column name in header");
    if (std::find(table.header.begin(), table.header.end(), name) != table.header.end()) {
      throw Error(std::string(source) + ": duplicate column '" + name + "'");
    }
    table.header.push_back(std::move(name));
  }
  if (lines.size() == 1) throw Error(std::string(source) + ": no data rows");

  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto where = std::string(source) + " line " + std::to_string(l + 1);
    const auto cells = split(lines[l]);
    if (cells.size() != table.header.size()) {
      throw Error(where + ": expected " + std::to_string(table.header.size()) + " cells, found " +
                  std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(row[c])) {
        throw Error(where + ", column '" + table.header[c] + "': not a finite number: '" +
                    std::string(cell) + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

MetricSpec parse_metric(std::string_view text, std::size_t dimension) {
  if (text == "euclidean") return MetricSpec::euclidean(dimension);
  if (text == "manhattan") return MetricSpec::manhattan(dimension);
  if (text == "discrete") return MetricSpec::discrete(dimension);
  if (text.starts_with("matrix:")) {
    if (dimension != 1) throw Error("a matrix metric needs exactly one index column");
    const auto path = text.substr(7);
    if (path.empty()) throw Error("matrix metric needs a path: matrix:<path>");
    return MetricSpec::precomputed(
        std::make_shared<const DistanceMatrix>(load_distance_matrix(std::string(path))));
  }
  throw Error("unknown metric '" + std::string(text) +
              "' (expected euclidean, manhattan, discrete or matrix:<path>)");
}

Margin select_margin(const CsvTable& table, const std::vector<std::string>& columns,
                     const MetricSpec& metric) {
  if (columns.empty()) throw Error("no columns selected");
  std::vector<std::size_t> idx;
  for (const auto& name : columns) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw Error("column '" + name + "' not found in header");
    idx.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  PointBuffer points(idx.size());
  std::vector<double> p(idx.size());
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < idx.size(); ++k) p[k] = row[idx[k]];
    points.push_back(p);
  }
  check_conforms(metric, points);
  return {metric, std::move(points)};
}

PairedSample parse_dataset(const std::filesystem::path& path, const RunConfig& config) {
  const auto table = read_csv(path);
  auto x_cols = config.x_cols;
  auto y_cols = config.y_cols;
  if (x_cols.empty()) x_cols = {table.header.at(0)};
  if (y_cols.empty()) {
    if (table.header.size() < 2) throw Error("need a y column; the input has only one column");
    y_cols = {table.header[1]};
  }
  std::set<std::string> seen;
  const std::vector<std::string>* selections[] = {&x_cols, &y_cols, &config.z_cols};
  for (const auto* cols : selections) {
    for (const auto& c : *cols) {
      if (!seen.insert(c).second) throw Error("column '" + c + "' selected more than once");
    }
  }
  auto margin = [&](const std::vector<std::string>& cols, const std::string& metric) {
    return select_margin(table, cols, parse_metric(metric, cols.size()));
  };
  if (!config.z_cols.empty()) {
    return {margin(x_cols, config.metric_x), margin(y_cols, config.metric_y),
            margin(config.z_cols, config.metric_z)};
  }
  return {margin(x_cols, config.metric_x), margin(y_cols, config.metric_y)};
}

}  // namespace emdcor::cli
