#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emdcor/baselines.hpp"
#include "emdcor/error.hpp"
#include "emdcor/inference.hpp"
#include "emdcor/transport.hpp"
#include "emdcor/univariate.hpp"
#include "emdcor/validation.hpp"
#include "emdcor_cli/cli.hpp"

namespace emdcor::cli {

namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json solver_json(const SolverStats& s, bool timings) {
  Json j;
  j["supply_nodes"] = s.supply_nodes;
  j["demand_nodes"] = s.demand_nodes;
  j["arcs"] = s.arcs;
  j["augmentations"] = s.augmentations;
  if (timings) j["seconds"] = s.seconds;
  return j;
}

// Flat objects print as "key value" lines; nested objects get dotted keys.
void write_plain(std::ostream& out, const Json& j, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    const auto name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      write_plain(out, value, name);
    } else {
      out << name << ' ' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
  }
}

void emit(std::ostream& out, const RunConfig& cfg, const Json& j) {
  if (cfg.format == Format::json) {
    out << j.dump(2) << '\n';
  } else {
    write_plain(out, j);
  }
}

Json report_json(const DependenceReport& r, bool timings) {
  Json j;
  j["n"] = r.n;
  j["ecov"] = r.ecov;
  j["evar_x"] = r.evar_x;
  j["evar_y"] = r.evar_y;
  j["evar_z"] = optional_number(r.evar_z);
  j["ecor"] = r.ecor;
  j["lower_bound_remark2"] = optional_number(r.lower_bound_remark2);
  j["upper_bound_theorem2"] = optional_number(r.upper_bound_theorem2);
  j["conditional_upper_bound"] = optional_number(r.conditional_upper_bound);
  j["dcor"] = optional_number(r.dcor);
  j["pearson"] = optional_number(r.pearson);
  j["solver"] = solver_json(r.solver, timings);
  return j;
}

int cmd_ecor(const RunConfig& cfg, std::ostream& out) {
  emit(out, cfg, report_json(dependence_report(parse_dataset(cfg.input, cfg)), cfg.timings));
  return kExitOk;
}

int cmd_dcor(const RunConfig& cfg, std::ostream& out) {
  const auto s = parse_dataset(cfg.input, cfg);
  if (s.trivariate()) throw Error("dcor takes two margins; drop --z-cols");
  Json j;
  j["n"] = s.size();
  j["dcov"] = distance_covariance(s);
  j["dcor"] = distance_correlation(s);
  emit(out, cfg, j);
  return kExitOk;
}

int cmd_wasserstein(const RunConfig& cfg, std::ostream& out) {
  const auto first = read_csv(cfg.input);
  const auto second = cfg.second_input ? read_csv(*cfg.second_input) : first;
  std::vector<std::string> x_cols = cfg.x_cols;
  std::vector<std::string> y_cols = cfg.y_cols;
  if (x_cols.empty()) x_cols = {first.header.at(0)};
  if (y_cols.empty()) {
    if (cfg.second_input) {
      y_cols = {second.header.at(0)};
    } else if (first.header.size() >= 2) {
      y_cols = {first.header[1]};
    } else {
      throw Error("need a second sample: --y-cols or --with");
    }
  }
  if (x_cols.size() != y_cols.size()) throw Error("both samples need the same number of columns");
  if (!cfg.second_input && x_cols == y_cols) throw Error("x and y select the same columns");
  const auto metric = parse_metric(cfg.metric_x, x_cols.size());
  const auto a = select_margin(first, x_cols, metric);
  const auto b = select_margin(second, y_cols, metric);

  double value = 0.0;
  if (metric.kind == MetricKind::euclidean && metric.dimension == 1) {
    value = wasserstein_1d(a.points.reals(), b.points.reals());
  } else if (a.points.size() == b.points.size()) {
    value = sequence_emd(a.points, b.points, metric) / static_cast<double>(a.points.size());
  } else {
    throw Error("samples of different sizes need a one-column euclidean metric");
  }
  Json j;
  j["n_x"] = a.points.size();
  j["n_y"] = b.points.size();
  j["wasserstein"] = value;
  emit(out, cfg, j);
  return kExitOk;
}

TransportProblem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
    TransportProblem p;
    p.supplies = j.at("supplies").get<std::vector<std::int64_t>>();
    p.demands = j.at("demands").get<std::vector<std::int64_t>>();
    const auto rows = j.at("costs").get<std::vector<std::vector<double>>>();
    if (rows.size() != p.supplies.size()) throw Error("costs must have one row per supply");
    p.costs = Matrix(p.supplies.size(), p.demands.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != p.demands.size()) {
        throw Error("cost row " + std::to_string(i) + " must have one entry per demand");
      }
      std::copy(rows[i].begin(), rows[i].end(), p.costs.row(i).begin());
    }
    p.scale = j.value("scale", 1.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

int cmd_transport(const RunConfig& cfg, std::ostream& out) {
  const auto problem = read_problem(cfg.input);
  const auto plan = solve_transport(problem);
  const auto cert = verify_optimality(problem, plan, cfg.tolerance);
  Json j;
  j["cost"] = plan.total_cost;
  Json flows = Json::array();
  for (const auto& f : plan.flows) flows.push_back({f.supply, f.demand, f.units});
  j["flows"] = std::move(flows);
  j["certified"] = cert.optimal;
  j["max_violation"] = cert.max_violation;
  j["solver"] = solver_json(plan.stats, cfg.timings);
  emit(out, cfg, j);
  return kExitOk;
}

int cmd_test(const RunConfig& cfg, std::ostream& out) {
  const auto s = parse_dataset(cfg.input, cfg);
  PermutationOptions o;
  o.permutations = cfg.permutations;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  const auto r = permutation_test_ecov(s, o);
  Json j;
  j["n"] = s.size();
  j["observed_statistic"] = r.observed_statistic;
  j["permutations"] = r.permutations;
  j["p_value"] = r.p_value;
  j["seed"] = r.seed;
  emit(out, cfg, j);
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto checks = run_validation(cfg.seed);
  const bool all = std::all_of(checks.begin(), checks.end(),
                               [](const ValidationCheck& c) { return c.passed; });
  if (cfg.format == Format::json) {
    Json j;
    j["seed"] = cfg.seed;
    j["passed"] = all;
    j["checks"] = Json::array();
    for (const auto& c : checks) {
      j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    out << j.dump(2) << '\n';
  } else {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
      out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
          << c.name << "  " << c.detail << '\n';
    }
    const auto passed = std::count_if(checks.begin(), checks.end(),
                                      [](const ValidationCheck& c) { return c.passed; });
    out << passed << '/' << checks.size() << " checks passed\n";
  }
  return all ? kExitOk : kExitChecksFailed;
}

void add_data_options(CLI::App* sub, RunConfig& cfg, bool with_z) {
  sub->add_option("--input", cfg.input, "CSV file with a header row")->required();
  sub->add_option("--x-cols", cfg.x_cols, "columns of the X margin (default: first column)")
      ->delimiter(',');
  sub->add_option("--y-cols", cfg.y_cols, "columns of the Y margin (default: second column)")
      ->delimiter(',');
  sub->add_option("--metric-x", cfg.metric_x, "euclidean | manhattan | discrete | matrix:<path>");
  sub->add_option("--metric-y", cfg.metric_y, "metric of the Y margin");
  if (with_z) {
    sub->add_option("--z-cols", cfg.z_cols, "columns of a third margin")->delimiter(',');
    sub->add_option("--metric-z", cfg.metric_z, "metric of the Z margin");
  }
}

void add_format_option(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "json or plain")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"json", Format::json}, {"plain", Format::plain}}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Earth mover's covariance, variance and correlation", "emdcor"};
  app.require_subcommand(1);

  auto* ecor = app.add_subcommand("ecor", "dependence report for a paired sample");
  add_data_options(ecor, cfg, true);
  add_format_option(ecor, cfg);
  ecor->add_flag("--timings", cfg.timings, "include solver wall time (output is then not reproducible)");

  auto* dcor = app.add_subcommand("dcor", "sample distance covariance and correlation");
  add_data_options(dcor, cfg, false);
  add_format_option(dcor, cfg);

  auto* wass = app.add_subcommand("wasserstein", "earth mover's distance between two samples");
  wass->add_option("--input", cfg.input, "CSV file holding the first sample")->required();
  wass->add_option("--with", cfg.second_input, "CSV file holding the second sample");
  wass->add_option("--x-cols", cfg.x_cols, "columns of the first sample")->delimiter(',');
  wass->add_option("--y-cols", cfg.y_cols, "columns of the second sample")->delimiter(',');
  wass->add_option("--metric-x", cfg.metric_x, "metric shared by both samples");
  add_format_option(wass, cfg);

  auto* transport = app.add_subcommand("transport", "solve a transportation problem (JSON)");
  transport->add_option("--input", cfg.input, "JSON {supplies, demands, costs, scale}")->required();
  transport->add_option("--tolerance", cfg.tolerance, "certificate tolerance")
      ->check(CLI::PositiveNumber);
  transport->add_flag("--timings", cfg.timings, "include solver wall time");
  add_format_option(transport, cfg);

  auto* test = app.add_subcommand("test-independence", "permutation test with ecov as statistic");
  add_data_options(test, cfg, false);
  test->add_option("--permutations", cfg.permutations, "number of permutations B (>= 19)");
  test->add_option("--seed", cfg.seed, "master seed");
  test->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  add_format_option(test, cfg);

  auto* validate = app.add_subcommand("validate", "seeded self-check table");
  validate->add_option("--seed", cfg.seed, "master seed");
  cfg.format = Format::json;
  validate->add_option("--format", cfg.format, "plain (default) or json")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"json", Format::json}, {"plain", Format::plain}}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  if (chosen == validate && validate->count("--format") == 0) cfg.format = Format::plain;

  try {
    if (chosen == ecor) return cmd_ecor(cfg, out);
    if (chosen == dcor) return cmd_dcor(cfg, out);
    if (chosen == wass) return cmd_wasserstein(cfg, out);
    if (chosen == transport) return cmd_transport(cfg, out);
    if (chosen == test) return cmd_test(cfg, out);
    return cmd_validate(cfg, out);
  } catch (const DegenerateError& e) {
    err << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "emdcor " << cfg.subcommand << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace emdcor::cli
