#include "emdcor/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "emdcor/error.hpp"

namespace emdcor {

void validate(const TransportProblem& p) {
  const std::size_t s = p.supplies.size();
  const std::size_t d = p.demands.size();
  if (s == 0 || d == 0) throw Error("transport problem needs at least one supply and one demand");
  if (s > kMaxTransportArcs / d) {
    throw SizeLimitError("transport problem has " + std::to_string(s) + " x " +
                         std::to_string(d) + " arcs, above the limit of " +
                         std::to_string(kMaxTransportArcs));
  }
  if (p.costs.rows() != s || p.costs.cols() != d) {
    throw Error("cost matrix is " + std::to_string(p.costs.rows()) + "x" +
                std::to_string(p.costs.cols()) + ", expected " + std::to_string(s) + "x" +
                std::to_string(d));
  }
  if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw Error("mass scale must be positive");
  std::int64_t total_supply = 0;
  std::int64_t total_demand = 0;
  for (auto v : p.supplies) {
    if (v <= 0) throw Error("supplies must be positive integers");
    total_supply += v;
  }
  for (auto v : p.demands) {
    if (v <= 0) throw Error("demands must be positive integers");
    total_demand += v;
  }
  if (total_supply != total_demand) {
    throw Error("unbalanced transport problem: total supply " + std::to_string(total_supply) +
                " != total demand " + std::to_string(total_demand));
  }
  for (double c : p.costs.data()) {
    if (!std::isfinite(c) || c < 0.0) throw Error("costs must be finite and nonnegative");
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct OutArc {
  std::size_t demand;
  std::int64_t units;
};

// Successive shortest paths on the bipartite residual graph.
//
// The search runs backwards from every demand that still has a deficit:
// a demand j reaches any supply i through the forward arc (i, j) at reduced
// cost c_ij - u_i - v_j, and a supply i reaches a demand j through the
// reverse residual arc of a positive flow (i, j) at reduced cost zero. The
// first supply with remaining excess that gets settled ends the search.
class SspSolver {
 public:
  explicit SspSolver(const TransportProblem& p)
      : s_(p.supplies.size()),
        d_(p.demands.size()),
        cost_t_(d_ * s_),
        u_(s_, 0.0),
        v_(d_, 0.0),
        excess_(p.supplies),
        deficit_(p.demands),
        out_(s_),
        dist_s_(s_),
        dist_d_(d_),
        pred_s_(s_),
        pred_d_(d_),
        settled_s_(s_),
        settled_d_(d_) {
    for (std::size_t i = 0; i < s_; ++i) {
      for (std::size_t j = 0; j < d_; ++j) cost_t_[j * s_ + i] = p.costs(i, j);
    }
  }

  std::size_t run() {
    initialize();
    std::size_t augmentations = 0;
    while (open_deficits_ > 0) {
      const std::size_t terminal = shortest_paths();
      update_potentials(dist_s_[terminal]);
      augment(terminal);
      ++augmentations;
    }
    return augmentations;
  }

  std::vector<Flow> flows() const {
    std::vector<Flow> out;
    for (std::size_t i = 0; i < s_; ++i) {
      for (const auto& a : out_[i]) out.push_back({i, a.demand, a.units});
    }
    std::sort(out.begin(), out.end(), [](const Flow& a, const Flow& b) {
      return a.supply != b.supply ? a.supply < b.supply : a.demand < b.demand;
    });
    return out;
  }

  const std::vector<double>& supply_potentials() const { return u_; }
  const std::vector<double>& demand_potentials() const { return v_; }

 private:
  double reduced(std::size_t i, std::size_t j) const {
    return std::max(0.0, cost_t_[j * s_ + i] - u_[i] - v_[j]);
  }

  void add_flow(std::size_t i, std::size_t j, std::int64_t units) {
    for (auto& a : out_[i]) {
      if (a.demand == j) {
        a.units += units;
        if (a.units == 0) {
          a = out_[i].back();
          out_[i].pop_back();
        }
        return;
      }
    }
    out_[i].push_back({j, units});
  }

  // Dual-feasible start: v_j = min_i c_ij, u = 0. Then every demand is fed
  // greedily along its zero reduced-cost arcs.
  void initialize() {
    for (std::size_t j = 0; j < d_; ++j) {
      const double* col = cost_t_.data() + j * s_;
      v_[j] = *std::min_element(col, col + s_);
    }
    for (std::size_t j = 0; j < d_; ++j) {
      const double* col = cost_t_.data() + j * s_;
      for (std::size_t i = 0; i < s_ && deficit_[j] > 0; ++i) {
        if (excess_[i] == 0 || col[i] != v_[j]) continue;
        const std::int64_t units = std::min(excess_[i], deficit_[j]);
        add_flow(i, j, units);
        excess_[i] -= units;
        deficit_[j] -= units;
      }
      if (deficit_[j] > 0) ++open_deficits_;
    }
  }

  std::size_t shortest_paths() {
    std::fill(dist_s_.begin(), dist_s_.end(), kInf);
    std::fill(dist_d_.begin(), dist_d_.end(), kInf);
    std::fill(settled_s_.begin(), settled_s_.end(), false);
    std::fill(settled_d_.begin(), settled_d_.end(), false);
    std::fill(pred_s_.begin(), pred_s_.end(), kNone);
    std::fill(pred_d_.begin(), pred_d_.end(), kNone);

    // Every open demand is a source at distance zero.
    for (std::size_t j = 0; j < d_; ++j) {
      if (deficit_[j] == 0) continue;
      dist_d_[j] = 0.0;
      settled_d_[j] = true;
      relax_from_demand(j);
    }

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    while (true) {
      std::size_t best_s = kNone;
      for (std::size_t i = 0; i < s_; ++i) {
        if (!settled_s_[i] && dist_s_[i] < kInf &&
            (best_s == kNone || dist_s_[i] < dist_s_[best_s])) {
          best_s = i;
        }
      }
      while (!heap.empty() && (settled_d_[heap.top().second] ||
                               heap.top().first != dist_d_[heap.top().second])) {
        heap.pop();
      }
      const bool take_demand =
          !heap.empty() && (best_s == kNone || heap.top().first < dist_s_[best_s]);
      if (take_demand) {
        const std::size_t j = heap.top().second;
        heap.pop();
        settled_d_[j] = true;
        relax_from_demand(j);
        continue;
      }
      if (best_s == kNone) throw Error("transport solver: no augmenting path (internal error)");
      settled_s_[best_s] = true;
      if (excess_[best_s] > 0) return best_s;
      const double di = dist_s_[best_s];
      for (const auto& a : out_[best_s]) {
        const std::size_t j = a.demand;
        if (!settled_d_[j] && di < dist_d_[j]) {
          dist_d_[j] = di;
          pred_d_[j] = best_s;
          heap.emplace(di, j);
        }
      }
    }
  }

  void relax_from_demand(std::size_t j) {
    const double dj = dist_d_[j];
    const double* col = cost_t_.data() + j * s_;
    const double vj = v_[j];
    for (std::size_t i = 0; i < s_; ++i) {
      if (settled_s_[i]) continue;
      const double nd = dj + std::max(0.0, col[i] - u_[i] - vj);
      if (nd < dist_s_[i]) {
        dist_s_[i] = nd;
        pred_s_[i] = j;
      }
    }
  }

  void update_potentials(double bound) {
    for (std::size_t i = 0; i < s_; ++i) u_[i] += std::min(dist_s_[i], bound);
    for (std::size_t j = 0; j < d_; ++j) v_[j] -= std::min(dist_d_[j], bound);
  }

  void augment(std::size_t terminal) {
    // Walk back to the source demand and find the bottleneck.
    std::int64_t bottleneck = excess_[terminal];
    std::size_t i = terminal;
    std::size_t j = pred_s_[i];
    while (pred_d_[j] != kNone) {
      const std::size_t prev = pred_d_[j];
      for (const auto& a : out_[prev]) {
        if (a.demand == j) bottleneck = std::min(bottleneck, a.units);
      }
      j = pred_s_[prev];
    }
    bottleneck = std::min(bottleneck, deficit_[j]);

    i = terminal;
    j = pred_s_[i];
    excess_[terminal] -= bottleneck;
    while (true) {
      add_flow(i, j, bottleneck);
      const std::size_t prev = pred_d_[j];
      if (prev == kNone) break;
      add_flow(prev, j, -bottleneck);
      i = prev;
      j = pred_s_[i];
    }
    deficit_[j] -= bottleneck;
    if (deficit_[j] == 0) --open_deficits_;
  }

  std::size_t s_;
  std::size_t d_;
  std::vector<double> cost_t_;  // demand-major copy of the costs
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<std::int64_t> excess_;
  std::vector<std::int64_t> deficit_;
  std::vector<std::vector<OutArc>> out_;
  std::size_t open_deficits_ = 0;

  std::vector<double> dist_s_;
  std::vector<double> dist_d_;
  std::vector<std::size_t> pred_s_;
  std::vector<std::size_t> pred_d_;
  std::vector<char> settled_s_;
  std::vector<char> settled_d_;
};

double plan_cost(const TransportProblem& p, const std::vector<Flow>& flows) {
  long double total = 0.0L;
  for (const auto& f : flows) {
    total += static_cast<long double>(f.units) * p.costs(f.supply, f.demand);
  }
  return static_cast<double>(total / p.scale);
}

}  // namespace

TransportPlan solve_transport(const TransportProblem& problem) {
  validate(problem);
  const auto start = std::chrono::steady_clock::now();
  SspSolver solver(problem);
  TransportPlan plan;
  plan.stats.augmentations = solver.run();
  plan.flows = solver.flows();
  plan.total_cost = plan_cost(problem, plan.flows);
  plan.supply_potentials = solver.supply_potentials();
  plan.demand_potentials = solver.demand_potentials();
  plan.stats.supply_nodes = problem.supplies.size();
  plan.stats.demand_nodes = problem.demands.size();
  plan.stats.arcs = problem.supplies.size() * problem.demands.size();
  plan.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return plan;
}

OptimalityReport verify_optimality(const TransportProblem& p, const TransportPlan& plan,
                                   double tolerance) {
  const std::size_t s = p.supplies.size();
  const std::size_t d = p.demands.size();
  if (p.costs.rows() != s || p.costs.cols() != d) throw Error("cost matrix shape mismatch");
  if (plan.supply_potentials.size() != s || plan.demand_potentials.size() != d) {
    throw Error("plan potentials do not match the problem shape");
  }
  OptimalityReport report;
  report.optimal = true;
  auto note = [&](double violation, bool failed, std::string what) {
    if (violation > report.max_violation || (failed && report.optimal)) {
      report.max_violation = std::max(report.max_violation, violation);
      report.worst = std::move(what);
    }
    if (failed) report.optimal = false;
  };

  std::vector<std::int64_t> rows(s, 0);
  std::vector<std::int64_t> cols(d, 0);
  Matrix flow(s, d);
  for (const auto& f : plan.flows) {
    if (f.supply >= s || f.demand >= d) throw Error("plan flow refers to a missing node");
    if (f.units <= 0) {
      note(static_cast<double>(-f.units), true, "non-positive flow entry");
      continue;
    }
    rows[f.supply] += f.units;
    cols[f.demand] += f.units;
    flow(f.supply, f.demand) += static_cast<double>(f.units);
  }
  for (std::size_t i = 0; i < s; ++i) {
    if (rows[i] != p.supplies[i]) {
      note(std::abs(static_cast<double>(rows[i] - p.supplies[i])), true,
           "supply " + std::to_string(i) + " ships " + std::to_string(rows[i]) + " of " +
               std::to_string(p.supplies[i]));
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (cols[j] != p.demands[j]) {
      note(std::abs(static_cast<double>(cols[j] - p.demands[j])), true,
           "demand " + std::to_string(j) + " receives " + std::to_string(cols[j]) + " of " +
               std::to_string(p.demands[j]));
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = p.costs(i, j);
      const double rc = c - plan.supply_potentials[i] - plan.demand_potentials[j];
      const double scaled = 1.0 + std::abs(c);
      double violation = std::max(0.0, -rc) / scaled;
      if (flow(i, j) > 0.0) violation = std::max(violation, std::abs(rc) / scaled);
      if (violation > 0.0) {
        note(violation, violation > tolerance,
             "reduced cost " + std::to_string(rc) + " on arc (" + std::to_string(i) + ", " +
                 std::to_string(j) + ")");
      }
    }
  }
  const double recomputed = plan_cost(p, plan.flows);
  const double cost_gap = std::abs(recomputed - plan.total_cost) / (1.0 + std::abs(recomputed));
  if (cost_gap > 0.0) note(cost_gap, cost_gap > tolerance, "total_cost disagrees with flows");
  return report;
}

namespace {

struct Enumerator {
  const TransportProblem& p;
  std::vector<std::int64_t> residual;
  double best = kInf;
  std::size_t plans = 0;

  void visit(std::size_t i, std::size_t j, std::int64_t left, double cost) {
    if (i == p.supplies.size()) {
      ++plans;
      best = std::min(best, cost);
      return;
    }
    if (j == p.demands.size()) {
      if (left == 0) {
        const std::int64_t next = i + 1 < p.supplies.size() ? p.supplies[i + 1] : 0;
        visit(i + 1, 0, next, cost);
      }
      return;
    }
    const std::int64_t cap = std::min(left, residual[j]);
    for (std::int64_t x = 0; x <= cap; ++x) {
      residual[j] -= x;
      visit(i, j + 1, left - x, cost + static_cast<double>(x) * p.costs(i, j));
      residual[j] += x;
    }
  }
};

}  // namespace

BruteForceResult brute_force_transport(const TransportProblem& problem) {
  validate(problem);
  const auto total =
      std::accumulate(problem.supplies.begin(), problem.supplies.end(), std::int64_t{0});
  if (total > kMaxBruteForceUnits) {
    throw SizeLimitError("brute_force_transport supports at most " +
                         std::to_string(kMaxBruteForceUnits) + " units, got " +
                         std::to_string(total));
  }
  Enumerator e{problem, problem.demands};
  e.visit(0, 0, problem.supplies[0], 0.0);
  return {e.best / problem.scale, e.plans};
}

}  // namespace emdcor
