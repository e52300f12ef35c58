#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "atoms.hpp"
#include "emdcor/dependence.hpp"
#include "emdcor/error.hpp"

namespace emdcor {

ProductMeasure build_trivariate_product_measure(const PairedSample& sample) {
  if (!sample.trivariate()) throw Error("trivariate ecov needs a z margin");
  const std::size_t n = sample.size();
  if (n < 2) throw Error("trivariate ecov requires at least two observations");

  const std::array<const Margin*, 3> margins{&sample.x(), &sample.y(), &sample.z()};
  std::array<detail::DistinctPoints, 3> distinct;
  std::array<Matrix, 3> dist;
  for (std::size_t k = 0; k < 3; ++k) {
    distinct[k] = detail::distinct_points(margins[k]->points);
    dist[k] = detail::distinct_distances(*margins[k], distinct[k]);
  }
  const std::size_t nx = distinct[0].size();
  const std::size_t ny = distinct[1].size();
  const std::size_t nz = distinct[2].size();

  ProductMeasure out;
  std::map<std::array<std::size_t, 3>, std::size_t> ids;
  std::vector<std::array<std::size_t, 3>> supply_ids;
  const auto n2 = static_cast<std::int64_t>(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::array<std::size_t, 3> key{distinct[0].id_of_row[r], distinct[1].id_of_row[r],
                                         distinct[2].id_of_row[r]};
    auto [it, inserted] = ids.try_emplace(key, supply_ids.size());
    if (inserted) {
      supply_ids.push_back(key);
      out.problem.supplies.push_back(0);
    }
    out.problem.supplies[it->second] += n2;
  }

  const std::size_t demand_count = nx * ny * nz;
  if (supply_ids.size() > kMaxTransportArcs / demand_count) {
    throw SizeLimitError("trivariate ecov: " + std::to_string(supply_ids.size()) + " x " +
                         std::to_string(demand_count) + " arcs exceed the solver limit");
  }
  out.problem.demands.reserve(demand_count);
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      for (std::size_t c = 0; c < nz; ++c) {
        out.problem.demands.push_back(distinct[0].count[a] * distinct[1].count[b] *
                                      distinct[2].count[c]);
      }
    }
  }
  out.problem.costs = Matrix(supply_ids.size(), demand_count);
  for (std::size_t s = 0; s < supply_ids.size(); ++s) {
    const auto [sa, sb, sc] = supply_ids[s];
    auto row = out.problem.costs.row(s);
    std::size_t col = 0;
    for (std::size_t a = 0; a < nx; ++a) {
      for (std::size_t b = 0; b < ny; ++b) {
        const double partial = dist[0](sa, a) + dist[1](sb, b);
        for (std::size_t c = 0; c < nz; ++c) row[col++] = partial + dist[2](sc, c);
      }
    }
  }
  out.problem.scale = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  return out;
}

EcovSolution trivariate_ecov_solution(const PairedSample& sample) {
  const auto measure = build_trivariate_product_measure(sample);
  const auto plan = solve_transport(measure.problem);
  return {plan.total_cost, plan.stats};
}

double trivariate_ecov(const PairedSample& sample) {
  return trivariate_ecov_solution(sample).ecov;
}

double trivariate_ecor(const PairedSample& sample) {
  if (!sample.trivariate()) throw Error("trivariate ecor needs a z margin");
  const double denom = std::min(
      {empirical_evar(sample.x()), empirical_evar(sample.y()), empirical_evar(sample.z())});
  if (!(denom > 0.0)) throw DegenerateError("eCor undefined: degenerate margin");
  return trivariate_ecov(sample) / denom;
}

}  // namespace emdcor
