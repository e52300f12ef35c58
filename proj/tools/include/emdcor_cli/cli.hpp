#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "emdcor/dependence.hpp"

namespace emdcor::cli {

enum class Format { json, plain };

// Exit codes of the emdcor tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad arguments or unreadable / malformed input
inline constexpr int kExitDegenerate = 2;  // eCor or dCor undefined for the input
inline constexpr int kExitChecksFailed = 3;  // `validate` found a failing check

struct RunConfig {
  std::string subcommand;
  std::filesystem::path input;
  std::optional<std::filesystem::path> second_input;  // wasserstein --with
  std::vector<std::string> x_cols;
  std::vector<std::string> y_cols;
  std::vector<std::string> z_cols;
  std::string metric_x = "euclidean";
  std::string metric_y = "euclidean";
  std::string metric_z = "euclidean";
  std::uint64_t seed = 0;
  std::size_t permutations = 199;
  unsigned threads = 1;
  Format format = Format::json;
  bool timings = false;
  double tolerance = 1e-9;  // certificate tolerance for `transport`
};

// Header row plus numeric cells, read verbatim.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Comma-separated file with a header line. Every data row must have one
// numeric cell per header column; errors name the line and the column.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, std::string_view source = "input");

// "euclidean" | "manhattan" | "discrete" | "matrix:<path>".
MetricSpec parse_metric(std::string_view text, std::size_t dimension);

// Margin from the named columns of a table. A matrix metric takes exactly
// one column holding row indices into the matrix.
Margin select_margin(const CsvTable& table, const std::vector<std::string>& columns,
                     const MetricSpec& metric);

// Sample described by the config's input, columns and metrics. When no x or
// y columns are given the first and second header columns are used.
PairedSample parse_dataset(const std::filesystem::path& path, const RunConfig& config);

// Parses the command line and runs one subcommand, writing the payload to
// `out` and diagnostics to `err`. Returns one of the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emdcor::cli
