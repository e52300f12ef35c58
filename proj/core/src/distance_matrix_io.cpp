#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "emdcor/error.hpp"
#include "emdcor/metric.hpp"

namespace emdcor {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  cell = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error("distance matrix CSV: cell (" + std::to_string(row + 1) + ", " +
                std::to_string(col + 1) + ") is not a number: '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

DistanceMatrix parse_distance_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t cpos = 0;
    while (true) {
      auto comma = line.find(',', cpos);
      const auto cell = line.substr(cpos, comma == std::string_view::npos ? line.size() - cpos
                                                                          : comma - cpos);
      row.push_back(parse_cell(cell, rows.size(), row.size()));
      if (comma == std::string_view::npos) break;
      cpos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error("distance matrix CSV: row " + std::to_string(i + 1) + " has " +
                  std::to_string(rows[i].size()) + " cells, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return DistanceMatrix::from_matrix(std::move(m));
}

DistanceMatrix parse_distance_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("distance matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("d")) {
    throw Error("distance matrix JSON must be an object with keys \"n\" and \"d\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0) {
    throw Error("distance matrix JSON: \"n\" must be a positive integer");
  }
  const auto n = doc["n"].get<std::size_t>();
  const auto& d = doc["d"];
  if (!d.is_array() || d.size() != n) {
    throw Error("distance matrix JSON: \"d\" must be an array of " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!d[i].is_array() || d[i].size() != n) {
      throw Error("distance matrix JSON: row " + std::to_string(i) + " must have " +
                  std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!d[i][j].is_number()) {
        throw Error("distance matrix JSON: entry (" + std::to_string(i) + ", " +
                    std::to_string(j) + ") is not a number");
      }
      m(i, j) = d[i][j].get<double>();
    }
  }
  return DistanceMatrix::from_matrix(std::move(m));
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open distance matrix file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.extension() == ".json") return parse_distance_matrix_json(text);
  return parse_distance_matrix_csv(text);
}

}  // namespace emdcor
