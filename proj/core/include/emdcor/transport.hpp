#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emdcor/matrix.hpp"

namespace emdcor {

// Balanced transportation problem with integer masses and real costs.
//
// Callers integerize probability masses by a common factor and pass that
// factor as `scale`; reported costs are divided by it, so they are in the
// original probability units.
struct TransportProblem {
  std::vector<std::int64_t> supplies;
  std::vector<std::int64_t> demands;
  Matrix costs;  // supplies.size() x demands.size()
  double scale = 1.0;
};

// Largest supported supplies x demands.
inline constexpr std::size_t kMaxTransportArcs = 10'000'000;

// Throws emdcor::Error for unbalanced masses, non-positive masses, a cost
// matrix of the wrong shape, or negative / nonfinite costs, and
// SizeLimitError above kMaxTransportArcs.
void validate(const TransportProblem& problem);

struct Flow {
  std::size_t supply = 0;
  std::size_t demand = 0;
  std::int64_t units = 0;

  friend bool operator==(const Flow&, const Flow&) = default;
};

struct SolverStats {
  std::size_t supply_nodes = 0;
  std::size_t demand_nodes = 0;
  std::size_t arcs = 0;
  std::size_t augmentations = 0;
  double seconds = 0.0;
};

struct TransportPlan {
  std::vector<Flow> flows;  // positive flows sorted by (supply, demand)
  double total_cost = 0.0;  // sum(units * cost) / scale
  // Dual potentials in unscaled cost units: costs(i, j) - u[i] - v[j] >= 0
  // for every arc, with equality wherever flow is positive.
  std::vector<double> supply_potentials;
  std::vector<double> demand_potentials;
  SolverStats stats;
};

// Exact min-cost solution by successive shortest augmenting paths with
// node potentials. Shortest-path ties go to the lowest node index
// (supplies are numbered before demands).
TransportPlan solve_transport(const TransportProblem& problem);

// Independent reference solver: northwest-corner start followed by
// negative-cycle canceling. Cubic or worse; intended for cross-checks on
// small instances. Leaves the potentials empty.
TransportPlan solve_transport_reference(const TransportProblem& problem);

struct OptimalityReport {
  bool optimal = false;
  double max_violation = 0.0;  // worst normalized violation found
  std::string worst;           // human-readable description of it
};

// Certificate check: flow conservation (exact), nonnegative reduced cost on
// every arc and zero reduced cost on positive arcs, each to within
// tolerance * (1 + |cost|), and total_cost consistent with the flows.
// Throws emdcor::Error if the plan does not fit the problem's shape.
OptimalityReport verify_optimality(const TransportProblem& problem, const TransportPlan& plan,
                                   double tolerance = 1e-9);

// Exhaustive enumeration over every integral feasible plan.
struct BruteForceResult {
  double cost = 0.0;       // minimum, divided by scale
  std::size_t plans = 0;   // number of feasible integral plans visited
};

inline constexpr std::int64_t kMaxBruteForceUnits = 10;

// Throws SizeLimitError when the total supply exceeds kMaxBruteForceUnits.
BruteForceResult brute_force_transport(const TransportProblem& problem);

}  // namespace emdcor
