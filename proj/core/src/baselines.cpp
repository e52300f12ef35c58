#include "emdcor/baselines.hpp"

#include <cmath>
#include <string>

#include "emdcor/error.hpp"

namespace emdcor {

CenteredMatrix double_center(const Matrix& d) {
  const std::size_t n = d.rows();
  if (n == 0 || d.cols() != n) throw Error("double_center needs a nonempty square matrix");
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += d(i, j);
      col_mean[j] += d(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
    col_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);
  CenteredMatrix out{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.entries(i, j) = d(i, j) - row_mean[i] - col_mean[j] + grand;
    }
  }
  return out;
}

namespace {

double v_statistic(const CenteredMatrix& a, const CenteredMatrix& b) {
  const auto av = a.entries.data();
  const auto bv = b.entries.data();
  long double acc = 0.0L;
  for (std::size_t k = 0; k < av.size(); ++k) acc += static_cast<long double>(av[k]) * bv[k];
  const auto n = static_cast<long double>(a.entries.rows());
  return static_cast<double>(acc / (n * n));
}

struct Centered {
  CenteredMatrix x;
  CenteredMatrix y;
};

Centered center_both(const PairedSample& s) {
  if (s.size() < 2) throw Error("distance covariance requires at least two observations");
  return {double_center(pairwise_matrix(s.x().metric, s.x().points)),
          double_center(pairwise_matrix(s.y().metric, s.y().points))};
}

}  // namespace

double distance_covariance(const PairedSample& sample) {
  const auto c = center_both(sample);
  return std::sqrt(std::max(0.0, v_statistic(c.x, c.y)));
}

double distance_correlation(const PairedSample& sample) {
  const auto c = center_both(sample);
  const double dcov = std::sqrt(std::max(0.0, v_statistic(c.x, c.y)));
  const double dvar_x = std::sqrt(std::max(0.0, v_statistic(c.x, c.x)));
  const double dvar_y = std::sqrt(std::max(0.0, v_statistic(c.y, c.y)));
  if (!(dvar_x * dvar_y > 0.0)) throw DegenerateError("dCor undefined: degenerate margin");
  return dcov / std::sqrt(dvar_x * dvar_y);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("pearson_correlation: samples differ in length");
  if (xs.size() < 2) throw Error("pearson_correlation requires at least two observations");
  const auto n = static_cast<long double>(xs.size());
  long double mx = 0.0L;
  long double my = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  long double sxy = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0L && syy > 0.0L)) throw DegenerateError("Pearson correlation undefined: zero variance");
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace emdcor
