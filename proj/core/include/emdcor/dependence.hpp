#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "emdcor/metric.hpp"
#include "emdcor/transport.hpp"

namespace emdcor {

using Rational = boost::rational<std::int64_t>;

// Sample points of one variable together with the metric they live in.
struct Margin {
  MetricSpec metric;
  PointBuffer points;
};

// Aligned observations (x_i, y_i) or (x_i, y_i, z_i).
class PairedSample {
 public:
  PairedSample(Margin x, Margin y);
  PairedSample(Margin x, Margin y, Margin z);

  // Real-valued margins under the euclidean (absolute value) metric.
  static PairedSample from_reals(std::span<const double> xs, std::span<const double> ys);
  static PairedSample from_reals(std::span<const double> xs, std::span<const double> ys,
                                 std::span<const double> zs);

  std::size_t size() const noexcept { return x_.points.size(); }
  bool trivariate() const noexcept { return z_.has_value(); }

  const Margin& x() const noexcept { return x_; }
  const Margin& y() const noexcept { return y_; }
  const Margin& z() const;

  // Copy with the Y points replaced (same metric, same length).
  PairedSample with_y(PointBuffer y_points) const;
  // X and Y roles exchanged (bivariate only).
  PairedSample swapped() const;

 private:
  Margin x_;
  Margin y_;
  std::optional<Margin> z_;
};

// Joint empirical law (mass 1/n on each observed pair) against the product
// of its margins (mass 1/n^2 on each (x_i, y_j)), with coincident atoms
// merged by exact bitwise equality and masses scaled by n^2.
struct ProductMeasure {
  TransportProblem problem;
  // Representative sample rows of each supply atom (x row, y row) and each
  // demand atom (x row, y row).
  std::vector<std::pair<std::size_t, std::size_t>> supply_atoms;
  std::vector<std::pair<std::size_t, std::size_t>> demand_atoms;
};

ProductMeasure build_product_measure(const PairedSample& sample);

struct EcovSolution {
  double ecov = 0.0;
  SolverStats stats;
};

// Earth mover's covariance of the empirical law (bivariate, n >= 2).
EcovSolution empirical_ecov_solution(const PairedSample& sample);
double empirical_ecov(const PairedSample& sample);

// (1/n^2) sum_{i,j} d(x_i, x_j).
double empirical_evar(const PointBuffer& points, const MetricSpec& metric);
double empirical_evar(const Margin& margin);

// ecov / min(evar_x, evar_y). Throws DegenerateError when a margin is
// constant, since the ratio is undefined there.
double empirical_ecor(const PairedSample& sample);

// By the triangle inequality ecov >= |E d(X, Y) - E d(X', Y')|.
// Needs both margins in the same metric; throws otherwise.
double ecov_lower_bound_remark2(const PairedSample& sample);

// Cost of the coupling that keeps X fixed and moves each conditional law of
// Y given X = x onto the marginal law of Y:
//   sum_x P(X = x) * integral |G(y | x) - G(y)| dy.
// An upper bound on ecov. Y must be real with the absolute-value metric.
double conditional_coupling_ecov(const PairedSample& sample);

// Finite-support joint law with exact rational masses.
struct JointAtom {
  std::vector<double> x;
  std::vector<double> y;
  Rational mass;
};

struct DiscreteJoint {
  MetricSpec x_metric;
  MetricSpec y_metric;
  std::vector<JointAtom> atoms;

  // Masses positive and summing exactly to one; points conform.
  void validate() const;
};

double discrete_ecov_exact(const DiscreteJoint& joint);
// Gini form sum_{a,b} p_a p_b d(a, b) over the X (or Y) marginal.
double discrete_evar_x(const DiscreteJoint& joint);
double discrete_evar_y(const DiscreteJoint& joint);
// Throws DegenerateError when a marginal is a point mass.
double discrete_ecor_exact(const DiscreteJoint& joint);
double conditional_coupling_ecov(const DiscreteJoint& joint);

// Two indicators with P(X = 1) = p_x, P(Y = 1) = p_y, P(X = Y = 1) = p_xy.
struct BernoulliPair {
  Rational p_x;
  Rational p_y;
  Rational p_xy;

  // Fréchet bounds max(0, p_x + p_y - 1) <= p_xy <= min(p_x, p_y).
  void validate() const;
  DiscreteJoint to_joint() const;
};

struct BernoulliDependence {
  Rational ecov;
  Rational ecor;
};

// ecov = 2 |p_xy - p_x p_y|.
Rational bernoulli_ecov_closed_form(const BernoulliPair& b);
// Adds ecor = |p_xy - p_x p_y| / min(p_x (1 - p_x), p_y (1 - p_y)); throws
// DegenerateError when either indicator is constant.
BernoulliDependence bernoulli_ecor_closed_form(const BernoulliPair& b);

struct GaussianEcorBounds {
  double upper = 0.0;  // sqrt(1 - sqrt(1 - rho^2))
  double lower = 0.0;  // |1 - sqrt(1 - rho)| for equal variances, else 0
  double evar_x = 0.0;  // 2 sigma_x / sqrt(pi)
  double evar_y = 0.0;
};

GaussianEcorBounds gaussian_ecor_bounds(double rho, double sigma_x, double sigma_y);
// Mean distance between two independent N(mu, sigma^2) draws.
double normal_evar(double sigma);

// Three-variable versions: joint law against the product of all three
// margins under d = dx + dy + dz, masses scaled by n^3. The atom row lists
// of the returned ProductMeasure are left empty.
ProductMeasure build_trivariate_product_measure(const PairedSample& sample);
EcovSolution trivariate_ecov_solution(const PairedSample& sample);
double trivariate_ecov(const PairedSample& sample);
// ecov / min(evar_x, evar_y, evar_z); not bounded by one in general.
double trivariate_ecor(const PairedSample& sample);

struct DependenceReport {
  std::size_t n = 0;
  double ecov = 0.0;
  double evar_x = 0.0;
  double evar_y = 0.0;
  std::optional<double> evar_z;
  double ecor = 0.0;
  std::optional<double> lower_bound_remark2;
  std::optional<double> upper_bound_theorem2;
  std::optional<double> conditional_upper_bound;
  std::optional<double> dcor;
  std::optional<double> pearson;
  SolverStats solver;
};

// Everything above for one sample. Bounds and baselines that do not apply
// to the sample's metrics are left empty. Throws DegenerateError when ecor
// is undefined.
DependenceReport dependence_report(const PairedSample& sample);

}  // namespace emdcor
