#include "emdcor/inference.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "emdcor/error.hpp"
#include "emdcor/random.hpp"
#include "emdcor/univariate.hpp"

namespace emdcor {

std::vector<std::size_t> replicate_permutation(std::size_t n, std::uint64_t seed,
                                               std::uint64_t replicate) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = RandomStream::substream(seed, replicate);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

double permuted_ecov(const PairedSample& sample, const std::vector<std::size_t>& order) {
  return empirical_ecov(sample.with_y(sample.y().points.select(order)));
}

TestResult permutation_test_ecov(const PairedSample& sample, const PermutationOptions& options) {
  if (sample.trivariate()) throw Error("permutation test is defined for bivariate samples");
  if (sample.size() < 4) throw Error("permutation test requires at least four observations");
  if (options.permutations < 19) throw Error("permutation test requires at least 19 permutations");
  if (!(empirical_evar(sample.x()) > 0.0) || !(empirical_evar(sample.y()) > 0.0)) {
    throw DegenerateError("permutation test undefined: degenerate margin");
  }

  TestResult result;
  result.seed = options.seed;
  result.permutations = options.permutations;
  result.observed_statistic = empirical_ecov(sample);

  const std::size_t b_count = options.permutations;
  std::vector<double> stats(b_count);
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, b_count));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (std::size_t b = t; b < b_count; b += threads) {
        stats[b] = permuted_ecov(sample, replicate_permutation(sample.size(), options.seed, b));
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const double threshold = result.observed_statistic -
                           kPermutationTieTolerance * (1.0 + std::abs(result.observed_statistic));
  const auto extreme = std::count_if(stats.begin(), stats.end(),
                                     [threshold](double s) { return s >= threshold; });
  result.p_value = static_cast<double>(1 + extreme) / static_cast<double>(b_count + 1);
  if (options.keep_replicates) result.replicate_statistics = std::move(stats);
  return result;
}

namespace {

double quantile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

GaussianValidation mc_validate_gaussian(double rho, std::size_t n, std::size_t replicates,
                                        std::uint64_t seed) {
  if (!(std::abs(rho) < 1.0)) throw Error("mc_validate_gaussian needs |rho| < 1");
  if (n < 10) throw Error("mc_validate_gaussian needs n >= 10");
  if (replicates == 0) throw Error("mc_validate_gaussian needs at least one replicate");

  GaussianValidation out;
  out.rho = rho;
  out.n = n;
  out.replicates = replicates;
  out.seed = seed;
  out.bounds = gaussian_ecor_bounds(rho, 1.0, 1.0);
  const double residual = std::sqrt(1.0 - rho * rho);
  for (std::size_t r = 0; r < replicates; ++r) {
    auto rng = RandomStream::substream(seed, r);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [a, b] = rng.normal_pair();
      xs[i] = a;
      ys[i] = rho * a + residual * b;
    }
    out.ecors.push_back(empirical_ecor(PairedSample::from_reals(xs, ys)));
  }
  out.mean = std::accumulate(out.ecors.begin(), out.ecors.end(), 0.0) /
             static_cast<double>(out.ecors.size());
  out.q10 = quantile(out.ecors, 0.1);
  out.median = quantile(out.ecors, 0.5);
  out.q90 = quantile(out.ecors, 0.9);
  return out;
}

CubeValidation mc_validate_cube(int dimension, std::size_t draws, std::uint64_t seed) {
  if (dimension < 1) throw Error("mc_validate_cube needs dimension >= 1");
  if (draws < 10'000) throw Error("mc_validate_cube needs at least 10^4 draws");
  CubeValidation out;
  out.dimension = dimension;
  out.draws = draws;
  auto rng = RandomStream::substream(seed, 0);
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (std::size_t k = 0; k < draws; ++k) {
    double s = 0.0;
    for (int c = 0; c < dimension; ++c) {
      const double d = rng.uniform() - rng.uniform();
      s += d * d;
    }
    const double dist = std::sqrt(s);
    sum += dist;
    sum_sq += static_cast<long double>(dist) * dist;
  }
  const auto m = static_cast<long double>(draws);
  const long double mean = sum / m;
  const long double var = (sum_sq - m * mean * mean) / (m - 1.0L);
  out.estimate = static_cast<double>(mean);
  out.standard_error = static_cast<double>(std::sqrt(std::max(0.0L, var) / m));
  out.quadrature = cube_evar_erf_integral(dimension);
  out.lower_bound = std::sqrt(static_cast<double>(dimension)) / 3.0;
  out.upper_bound = std::sqrt(static_cast<double>(dimension) / 6.0);
  return out;
}

}  // namespace emdcor
