#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "emdcor/metric.hpp"

namespace emdcor {

// sup{t : F(t) <= u} for the empirical CDF of a sorted sample, u in [0, 1).
double quantile_inverse(std::span<const double> sorted, double u);

// Earth mover's distance between the empirical laws of two real samples.
// Equal sizes use the sorted-difference formula; otherwise the integral of
// |F - G| over the step CDFs is evaluated exactly.
double wasserstein_1d(std::span<const double> xs, std::span<const double> ys);

// Same, for discrete laws given by support points and positive integer
// masses (each side normalized by its own total).
double wasserstein_1d_weighted(std::span<const double> xs, std::span<const std::int64_t> x_mass,
                               std::span<const double> ys, std::span<const std::int64_t> y_mass);

// (1/n^2) sum_{i,j} |x_i - x_j| in O(n log n) via the order statistics.
double gini_mean_difference(std::span<const double> xs);

// 2 * integral of F (1 - F) for the empirical CDF.
double evar_cdf_integral(std::span<const double> xs);

// Mean distance between two independent uniform points of the unit cube in
// dimension `dimension`, by adaptive quadrature of the error-function
// integral representation. Relative tolerance 1e-10.
double cube_evar_erf_integral(int dimension);

// The integrand of the representation above at u > 0, continuous at 0.
double cube_evar_integrand(double u, int dimension);

// min over permutations pi of sum_i d(x_i, y_pi(i)). One-dimensional
// euclidean / manhattan inputs use the sorted formula; anything else is
// solved as a unit-mass assignment.
double sequence_emd(const PointBuffer& xs, const PointBuffer& ys, const MetricSpec& m);

}  // namespace emdcor
