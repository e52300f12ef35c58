#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emdcor/dependence.hpp"

namespace emdcor {

struct PermutationOptions {
  std::size_t permutations = 199;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool keep_replicates = false;
};

struct TestResult {
  double observed_statistic = 0.0;
  std::size_t permutations = 0;
  double p_value = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> replicate_statistics;  // filled when requested
};

// Replicates whose statistic reaches observed - tolerance * (1 + observed)
// count as at least as extreme, so exact ties survive round-off.
inline constexpr double kPermutationTieTolerance = 1e-12;

// Permutation test of independence with the empirical ecov as statistic.
// Replicate b shuffles the Y margin with RandomStream::substream(seed, b),
// so the result does not depend on the thread count. The p-value is
// (1 + #{replicate >= observed}) / (B + 1).
// Requires n >= 4 and B >= 19; throws DegenerateError for a constant margin.
TestResult permutation_test_ecov(const PairedSample& sample, const PermutationOptions& options);

// The permutation applied by replicate `replicate` (Fisher-Yates).
std::vector<std::size_t> replicate_permutation(std::size_t n, std::uint64_t seed,
                                               std::uint64_t replicate);

// ecov of the sample with Y rows reordered by `order`.
double permuted_ecov(const PairedSample& sample, const std::vector<std::size_t>& order);

struct GaussianValidation {
  double rho = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> ecors;
  double mean = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  GaussianEcorBounds bounds;  // unit variances
};

// Simulates `replicates` samples of n standard bivariate normal pairs with
// correlation rho and records the empirical ecor of each.
GaussianValidation mc_validate_gaussian(double rho, std::size_t n, std::size_t replicates,
                                        std::uint64_t seed);

struct CubeValidation {
  int dimension = 0;
  std::size_t draws = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double quadrature = 0.0;
  double lower_bound = 0.0;  // sqrt(n) / 3
  double upper_bound = 0.0;  // sqrt(n / 6)
};

// Monte Carlo estimate of E|X - X'| for independent uniform points of the
// unit cube, next to the quadrature value and the elementary bounds.
CubeValidation mc_validate_cube(int dimension, std::size_t draws, std::uint64_t seed);

}  // namespace emdcor
