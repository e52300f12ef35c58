#pragma once

// Slow, independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "emdcor/metric.hpp"
#include "emdcor/random.hpp"

namespace emdcor::testing {

// (1/n^2) sum_{i,j} |x_i - x_j| by the double loop.
inline double pairwise_gini(const std::vector<double>& xs) {
  long double s = 0.0L;
  for (double a : xs) {
    for (double b : xs) s += std::abs(a - b);
  }
  const auto n = static_cast<long double>(xs.size());
  return static_cast<double>(s / (n * n));
}

inline double empirical_cdf(const std::vector<double>& sorted, double t) {
  const auto k = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
  return static_cast<double>(k) / static_cast<double>(sorted.size());
}

// Midpoint Riemann sum of |F - G| over [lo, hi] on a uniform grid. The
// integrand is a step function, so the error is confined to the cells
// containing a jump: at most (number of jumps) * cell width.
inline double riemann_cdf_distance(std::vector<double> xs, std::vector<double> ys, double lo,
                                   double hi, std::size_t cells) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double h = (hi - lo) / static_cast<double>(cells);
  long double s = 0.0L;
  for (std::size_t k = 0; k < cells; ++k) {
    const double t = lo + (static_cast<double>(k) + 0.5) * h;
    s += std::abs(empirical_cdf(xs, t) - empirical_cdf(ys, t));
  }
  return static_cast<double>(s * h);
}

// min over all permutations of sum_i d(x_i, y_pi(i)).
inline double permutation_emd(const PointBuffer& xs, const PointBuffer& ys, const MetricSpec& m) {
  std::vector<std::size_t> pi(xs.size());
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) s += distance(m, xs[i], ys[pi[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

// Monte Carlo mean distance between two uniform points of [0,1]^dim, drawn
// with a plain std::mt19937_64 of its own.
inline double monte_carlo_cube(int dim, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long double s = 0.0L;
  for (std::size_t k = 0; k < draws; ++k) {
    double q = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = u(g) - u(g);
      q += d * d;
    }
    s += std::sqrt(q);
  }
  return static_cast<double>(s / static_cast<long double>(draws));
}

}  // namespace emdcor::testing
