#include "emdcor/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "emdcor/error.hpp"
#include "emdcor/transport.hpp"

namespace emdcor {

namespace {

__extension__ using int128 = __int128;

void require_nonempty(std::span<const double> xs, const char* what) {
  if (xs.empty()) throw Error(std::string(what) + " requires a nonempty sample");
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double quantile_inverse(std::span<const double> sorted, double u) {
  require_nonempty(sorted, "quantile_inverse");
  if (!(u >= 0.0 && u < 1.0)) throw Error("quantile level must lie in [0, 1)");
  const auto n = sorted.size();
  // F(t) <= u holds for t < x_(k+1) where k = floor(u n); the supremum of
  // that set is x_(k+1), i.e. sorted[k].
  const auto k = std::min(static_cast<std::size_t>(std::floor(u * static_cast<double>(n))), n - 1);
  return sorted[k];
}

double wasserstein_1d_weighted(std::span<const double> xs, std::span<const std::int64_t> x_mass,
                               std::span<const double> ys, std::span<const std::int64_t> y_mass) {
  require_nonempty(xs, "wasserstein_1d");
  require_nonempty(ys, "wasserstein_1d");
  if (xs.size() != x_mass.size() || ys.size() != y_mass.size()) {
    throw Error("wasserstein_1d_weighted: values and masses differ in length");
  }
  struct Atom {
    double at;
    std::int64_t x;
    std::int64_t y;
  };
  std::vector<Atom> atoms;
  atoms.reserve(xs.size() + ys.size());
  std::int64_t total_x = 0;
  std::int64_t total_y = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (x_mass[i] <= 0) throw Error("wasserstein_1d_weighted: masses must be positive");
    atoms.push_back({xs[i], x_mass[i], 0});
    total_x += x_mass[i];
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (y_mass[i] <= 0) throw Error("wasserstein_1d_weighted: masses must be positive");
    atoms.push_back({ys[i], 0, y_mass[i]});
    total_y += y_mass[i];
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });

  // Between consecutive support points F = cx / Tx and G = cy / Ty, so
  // |F - G| = |cx Ty - cy Tx| / (Tx Ty) with the numerator exact in 128 bits.
  int128 cx = 0;
  int128 cy = 0;
  long double acc = 0.0L;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    cx += atoms[k].x;
    cy += atoms[k].y;
    const double gap = atoms[k + 1].at - atoms[k].at;
    if (gap == 0.0) continue;
    int128 diff = cx * total_y - cy * total_x;
    if (diff < 0) diff = -diff;
    acc += static_cast<long double>(diff) * gap;
  }
  return static_cast<double>(acc / (static_cast<long double>(total_x) * total_y));
}

double wasserstein_1d(std::span<const double> xs, std::span<const double> ys) {
  require_nonempty(xs, "wasserstein_1d");
  require_nonempty(ys, "wasserstein_1d");
  if (xs.size() == ys.size()) {
    const auto a = sorted_copy(xs);
    const auto b = sorted_copy(ys);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return static_cast<double>(acc / static_cast<long double>(a.size()));
  }
  const std::vector<std::int64_t> xm(xs.size(), 1);
  const std::vector<std::int64_t> ym(ys.size(), 1);
  return wasserstein_1d_weighted(xs, xm, ys, ym);
}

double gini_mean_difference(std::span<const double> xs) {
  require_nonempty(xs, "gini_mean_difference");
  const auto v = sorted_copy(xs);
  const auto n = static_cast<long double>(v.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // 1-based rank r contributes (2r - n - 1) x_(r).
    acc += (2.0L * static_cast<long double>(i + 1) - n - 1.0L) * v[i];
  }
  return static_cast<double>(2.0L * acc / (n * n));
}

double evar_cdf_integral(std::span<const double> xs) {
  require_nonempty(xs, "evar_cdf_integral");
  const auto v = sorted_copy(xs);
  const auto n = static_cast<long double>(v.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const long double f = static_cast<long double>(i + 1) / n;
    acc += f * (1.0L - f) * (v[i + 1] - v[i]);
  }
  return static_cast<double>(2.0L * acc);
}

namespace {

// h(u) = sqrt(pi) erf(u) / u - (1 - exp(-u^2)) / u^2 and (1 - h(u)) / u^2.
// Near zero both come from the power series
//   h(u) = sum_k (-1)^k a_k u^{2k},  a_k = 2 / (k! (2k + 1)) - 1 / (k + 1)!.
struct CubeKernel {
  double h;
  double one_minus_h_over_u2;
};

CubeKernel cube_kernel(double u) {
  if (u <= 1.0) {
    const double u2 = u * u;
    double factorial = 1.0;  // k!
    double power = 1.0;      // u^{2k-2}
    double sign = 1.0;       // (-1)^{k+1}
    double tail = 0.0;
    for (int k = 1; k <= 40; ++k) {
      factorial *= k;
      const double a = 2.0 / (factorial * (2 * k + 1)) - 1.0 / (factorial * (k + 1));
      const double term = sign * a * power;
      tail += term;
      if (std::abs(term) < 1e-18 * std::abs(tail)) break;
      power *= u2;
      sign = -sign;
    }
    return {1.0 - u2 * tail, tail};
  }
  const double u2 = u * u;
  const double h = std::sqrt(std::numbers::pi) * std::erf(u) / u - (1.0 - std::exp(-u2)) / u2;
  return {h, (1.0 - h) / u2};
}

}  // namespace

double cube_evar_integrand(double u, int dimension) {
  if (dimension < 1) throw Error("cube dimension must be at least 1");
  if (u < 0.0) throw Error("cube_evar_integrand is defined for u >= 0");
  const auto k = cube_kernel(u);
  // 1 - h^n = (1 - h)(1 + h + ... + h^{n-1})
  double geometric = 0.0;
  double hp = 1.0;
  for (int m = 0; m < dimension; ++m) {
    geometric += hp;
    hp *= k.h;
  }
  return k.one_minus_h_over_u2 * geometric / std::sqrt(std::numbers::pi);
}

double cube_evar_erf_integral(int dimension) {
  if (dimension < 1) throw Error("cube dimension must be at least 1");
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kTol = 1e-12;
  constexpr unsigned kDepth = 20;

  double err_head = 0.0;
  const double head = gauss_kronrod<double, 31>::integrate(
      [dimension](double u) { return cube_evar_integrand(u, dimension); }, 0.0, 1.0, kDepth, kTol,
      &err_head);
  // u in [1, inf) with u = 1/t: the du / u^2 weight becomes dt.
  double err_tail = 0.0;
  const double tail = gauss_kronrod<double, 31>::integrate(
      [dimension](double t) {
        const double u = 1.0 / t;
        const auto k = cube_kernel(u);
        return (1.0 - std::pow(k.h, dimension)) / std::sqrt(std::numbers::pi);
      },
      0.0, 1.0, kDepth, kTol, &err_tail);
  const double value = head + tail;
  if (!std::isfinite(value) || err_head + err_tail > 1e-10 * std::abs(value)) {
    throw Error("cube_evar_erf_integral: quadrature did not converge for dimension " +
                std::to_string(dimension));
  }
  return value;
}

double sequence_emd(const PointBuffer& xs, const PointBuffer& ys, const MetricSpec& m) {
  if (xs.size() != ys.size()) {
    throw Error("sequence_emd requires equal lengths, got " + std::to_string(xs.size()) + " and " +
                std::to_string(ys.size()));
  }
  check_conforms(m, xs);
  check_conforms(m, ys);
  if (xs.empty()) return 0.0;
  const bool sortable = m.point_dimension() == 1 &&
                        (m.kind == MetricKind::euclidean || m.kind == MetricKind::manhattan);
  if (sortable) {
    auto a = xs.reals();
    auto b = ys.reals();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return static_cast<double>(acc);
  }
  TransportProblem p;
  p.supplies.assign(xs.size(), 1);
  p.demands.assign(ys.size(), 1);
  p.costs = cross_matrix(m, xs, ys);
  p.scale = 1.0;
  return solve_transport(p).total_cost;
}

}  // namespace emdcor
