#pragma once

#include <span>

#include "emdcor/dependence.hpp"
#include "emdcor/matrix.hpp"

namespace emdcor {

// A_ij = d_ij - (row mean)_i - (column mean)_j + (grand mean).
struct CenteredMatrix {
  Matrix entries;
};

CenteredMatrix double_center(const Matrix& distances);

// Square root of the V-statistic (1/n^2) sum A_ij B_ij, clamped at zero
// before the root.
double distance_covariance(const PairedSample& sample);

// dCov(X, Y) / sqrt(dCov(X, X) dCov(Y, Y)). Throws DegenerateError when
// either distance variance vanishes.
double distance_correlation(const PairedSample& sample);

// Product-moment correlation. Throws DegenerateError for a constant input.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace emdcor
