#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "emdcor/error.hpp"
#include "emdcor/transport.hpp"

namespace emdcor {

namespace {

struct ResidualArc {
  std::size_t from;
  std::size_t to;
  double cost;
  std::size_t supply;  // underlying (supply, demand) pair
  std::size_t demand;
  bool reverse;        // true when traversing it decreases the flow
};

}  // namespace

TransportPlan solve_transport_reference(const TransportProblem& problem) {
  validate(problem);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t s = problem.supplies.size();
  const std::size_t d = problem.demands.size();
  std::vector<std::vector<std::int64_t>> flow(s, std::vector<std::int64_t>(d, 0));

  // Northwest corner.
  {
    auto supply = problem.supplies;
    auto demand = problem.demands;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < s && j < d) {
      const std::int64_t x = std::min(supply[i], demand[j]);
      flow[i][j] += x;
      supply[i] -= x;
      demand[j] -= x;
      if (supply[i] == 0) ++i;
      if (j < d && demand[j] == 0) ++j;
    }
  }

  double max_cost = 0.0;
  for (double c : problem.costs.data()) max_cost = std::max(max_cost, c);
  const double eps = 1e-12 * (1.0 + max_cost);
  const std::size_t nodes = s + d;
  std::size_t cancellations = 0;

  while (true) {
    std::vector<ResidualArc> arcs;
    arcs.reserve(2 * s * d);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double c = problem.costs(i, j);
        arcs.push_back({i, s + j, c, i, j, false});
        if (flow[i][j] > 0) arcs.push_back({s + j, i, -c, i, j, true});
      }
    }
    // Bellman-Ford from a virtual source joined to every node at cost 0.
    std::vector<double> dist(nodes, 0.0);
    std::vector<std::size_t> pred(nodes, arcs.size());
    std::size_t touched = 0;
    for (std::size_t round = 0; round < nodes && touched != nodes; ++round) {
      touched = nodes;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto& arc = arcs[a];
        if (dist[arc.from] + arc.cost < dist[arc.to] - eps) {
          dist[arc.to] = dist[arc.from] + arc.cost;
          pred[arc.to] = a;
          touched = arc.to;
        }
      }
    }
    if (touched == nodes) break;

    // `touched` was relaxed in round |V|, so walking predecessors |V| times
    // lands on a negative cycle.
    std::size_t v = touched;
    for (std::size_t k = 0; k < nodes; ++k) v = arcs[pred[v]].from;
    std::vector<std::size_t> cycle;
    std::size_t u = v;
    do {
      cycle.push_back(pred[u]);
      u = arcs[pred[u]].from;
    } while (u != v);

    double cycle_cost = 0.0;
    std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
    for (std::size_t a : cycle) {
      cycle_cost += arcs[a].cost;
      if (arcs[a].reverse) bottleneck = std::min(bottleneck, flow[arcs[a].supply][arcs[a].demand]);
    }
    if (cycle_cost >= -eps || bottleneck == std::numeric_limits<std::int64_t>::max()) break;
    for (std::size_t a : cycle) {
      flow[arcs[a].supply][arcs[a].demand] += arcs[a].reverse ? -bottleneck : bottleneck;
    }
    ++cancellations;
  }

  TransportPlan plan;
  long double total = 0.0L;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (flow[i][j] == 0) continue;
      plan.flows.push_back({i, j, flow[i][j]});
      total += static_cast<long double>(flow[i][j]) * problem.costs(i, j);
    }
  }
  plan.total_cost = static_cast<double>(total / problem.scale);
  plan.stats.supply_nodes = s;
  plan.stats.demand_nodes = d;
  plan.stats.arcs = s * d;
  plan.stats.augmentations = cancellations;
  plan.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return plan;
}

}  // namespace emdcor
