#include "emdcor/dependence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "atoms.hpp"
#include "emdcor/baselines.hpp"
#include "emdcor/error.hpp"
#include "emdcor/univariate.hpp"

namespace emdcor {

namespace detail {

namespace {

std::vector<std::uint64_t> bit_key(std::span<const double> p) {
  std::vector<std::uint64_t> key(p.size());
  std::transform(p.begin(), p.end(), key.begin(),
                 [](double v) { return std::bit_cast<std::uint64_t>(v); });
  return key;
}

}  // namespace

DistinctPoints distinct_points(const PointBuffer& points) {
  DistinctPoints out;
  out.id_of_row.resize(points.size());
  std::map<std::vector<std::uint64_t>, std::size_t> ids;
  for (std::size_t r = 0; r < points.size(); ++r) {
    auto [it, inserted] = ids.try_emplace(bit_key(points[r]), out.first_row.size());
    if (inserted) {
      out.first_row.push_back(r);
      out.count.push_back(0);
    }
    out.id_of_row[r] = it->second;
    ++out.count[it->second];
  }
  return out;
}

Matrix distinct_distances(const Margin& margin, const DistinctPoints& distinct) {
  const std::size_t k = distinct.size();
  Matrix out(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double d = distance(margin.metric, margin.points[distinct.first_row[a]],
                                margin.points[distinct.first_row[b]]);
      out(a, b) = d;
      out(b, a) = d;
    }
  }
  return out;
}

bool is_real_line(const MetricSpec& m) noexcept {
  return m.point_dimension() == 1 &&
         (m.kind == MetricKind::euclidean || m.kind == MetricKind::manhattan);
}

}  // namespace detail

namespace {

void check_margin(const Margin& m, std::size_t n, const char* name) {
  if (m.points.size() != n) {
    throw Error(std::string("margin ") + name + " has " + std::to_string(m.points.size()) +
                " points, expected " + std::to_string(n));
  }
  check_conforms(m.metric, m.points);
}

void require_bivariate(const PairedSample& s, const char* what) {
  if (s.trivariate()) throw Error(std::string(what) + " is defined for bivariate samples");
  if (s.size() < 2) throw Error(std::string(what) + " requires at least two observations");
}

Margin real_margin(std::span<const double> v) {
  return {MetricSpec::euclidean(1), PointBuffer::from_reals(v)};
}

}  // namespace

PairedSample::PairedSample(Margin x, Margin y) : x_(std::move(x)), y_(std::move(y)) {
  check_margin(x_, x_.points.size(), "x");
  check_margin(y_, x_.points.size(), "y");
}

PairedSample::PairedSample(Margin x, Margin y, Margin z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  check_margin(x_, x_.points.size(), "x");
  check_margin(y_, x_.points.size(), "y");
  check_margin(*z_, x_.points.size(), "z");
}

PairedSample PairedSample::from_reals(std::span<const double> xs, std::span<const double> ys) {
  return PairedSample(real_margin(xs), real_margin(ys));
}

PairedSample PairedSample::from_reals(std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> zs) {
  return PairedSample(real_margin(xs), real_margin(ys), real_margin(zs));
}

const Margin& PairedSample::z() const {
  if (!z_) throw Error("sample has no z margin");
  return *z_;
}

PairedSample PairedSample::with_y(PointBuffer y_points) const {
  PairedSample out = *this;
  out.y_.points = std::move(y_points);
  check_margin(out.y_, size(), "y");
  return out;
}

PairedSample PairedSample::swapped() const {
  if (trivariate()) throw Error("swapped() is defined for bivariate samples");
  return PairedSample(y_, x_);
}

ProductMeasure build_product_measure(const PairedSample& sample) {
  require_bivariate(sample, "build_product_measure");
  const std::size_t n = sample.size();
  const auto dx = detail::distinct_points(sample.x().points);
  const auto dy = detail::distinct_points(sample.y().points);
  const Matrix cx = detail::distinct_distances(sample.x(), dx);
  const Matrix cy = detail::distinct_distances(sample.y(), dy);

  // Supply atoms: distinct observed pairs, weight (multiplicity * n).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_ids;
  std::vector<std::pair<std::size_t, std::size_t>> supply_ids;
  ProductMeasure out;
  for (std::size_t r = 0; r < n; ++r) {
    const std::pair key{dx.id_of_row[r], dy.id_of_row[r]};
    auto [it, inserted] = pair_ids.try_emplace(key, supply_ids.size());
    if (inserted) {
      supply_ids.push_back(key);
      out.supply_atoms.emplace_back(r, r);
      out.problem.supplies.push_back(0);
    }
    out.problem.supplies[it->second] += static_cast<std::int64_t>(n);
  }

  const std::size_t demand_count = dx.size() * dy.size();
  if (supply_ids.size() > kMaxTransportArcs / demand_count) {
    throw SizeLimitError("empirical ecov: " + std::to_string(supply_ids.size()) + " x " +
                         std::to_string(demand_count) + " arcs exceed the solver limit");
  }
  // Demand atoms: every distinct (x, y) combination, weight cx * cy.
  out.problem.demands.reserve(demand_count);
  out.demand_atoms.reserve(demand_count);
  for (std::size_t a = 0; a < dx.size(); ++a) {
    for (std::size_t b = 0; b < dy.size(); ++b) {
      out.problem.demands.push_back(dx.count[a] * dy.count[b]);
      out.demand_atoms.emplace_back(dx.first_row[a], dy.first_row[b]);
    }
  }
  out.problem.costs = Matrix(supply_ids.size(), demand_count);
  for (std::size_t s = 0; s < supply_ids.size(); ++s) {
    const auto [sa, sb] = supply_ids[s];
    auto row = out.problem.costs.row(s);
    for (std::size_t a = 0; a < dx.size(); ++a) {
      for (std::size_t b = 0; b < dy.size(); ++b) row[a * dy.size() + b] = cx(sa, a) + cy(sb, b);
    }
  }
  out.problem.scale = static_cast<double>(n) * static_cast<double>(n);
  return out;
}

EcovSolution empirical_ecov_solution(const PairedSample& sample) {
  const auto measure = build_product_measure(sample);
  const auto plan = solve_transport(measure.problem);
  return {plan.total_cost, plan.stats};
}

double empirical_ecov(const PairedSample& sample) { return empirical_ecov_solution(sample).ecov; }

double empirical_evar(const PointBuffer& points, const MetricSpec& metric) {
  if (points.size() < 2) throw Error("empirical_evar requires at least two points");
  check_conforms(metric, points);
  if (detail::is_real_line(metric)) {
    const auto v = points.reals();
    return gini_mean_difference(v);
  }
  const std::size_t n = points.size();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) acc += distance(metric, points[i], points[j]);
  }
  return static_cast<double>(2.0L * acc / (static_cast<long double>(n) * n));
}

double empirical_evar(const Margin& margin) { return empirical_evar(margin.points, margin.metric); }

double empirical_ecor(const PairedSample& sample) {
  require_bivariate(sample, "empirical_ecor");
  const double denom = std::min(empirical_evar(sample.x()), empirical_evar(sample.y()));
  if (!(denom > 0.0)) throw DegenerateError("eCor undefined: degenerate margin");
  return empirical_ecov(sample) / denom;
}

double ecov_lower_bound_remark2(const PairedSample& sample) {
  require_bivariate(sample, "ecov_lower_bound_remark2");
  const auto& m = sample.x().metric;
  if (!(m == sample.y().metric)) {
    throw Error("the triangle-inequality lower bound needs both margins in the same metric");
  }
  const std::size_t n = sample.size();
  const auto& xs = sample.x().points;
  const auto& ys = sample.y().points;
  long double paired = 0.0L;
  long double all = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    paired += distance(m, xs[i], ys[i]);
    for (std::size_t j = 0; j < n; ++j) all += distance(m, xs[i], ys[j]);
  }
  const auto nn = static_cast<long double>(n);
  return static_cast<double>(std::abs(paired / nn - all / (nn * nn)));
}

double conditional_coupling_ecov(const PairedSample& sample) {
  require_bivariate(sample, "conditional_coupling_ecov");
  if (!detail::is_real_line(sample.y().metric)) {
    throw Error("conditional coupling needs a real Y margin under the absolute-value metric");
  }
  const auto ys = sample.y().points.reals();
  const auto groups = detail::distinct_points(sample.x().points);
  std::vector<std::vector<double>> by_group(groups.size());
  for (std::size_t r = 0; r < ys.size(); ++r) by_group[groups.id_of_row[r]].push_back(ys[r]);
  const auto n = static_cast<double>(ys.size());
  double acc = 0.0;
  for (const auto& g : by_group) {
    acc += static_cast<double>(g.size()) / n * wasserstein_1d(g, ys);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Finite-support laws with rational masses.

namespace {

struct Marginal {
  PointBuffer support;
  std::vector<Rational> mass;
  std::vector<std::size_t> id_of_atom;
};

Marginal marginal_of(const std::vector<JointAtom>& atoms, std::size_t dim, bool take_x) {
  PointBuffer pts(dim);
  for (const auto& a : atoms) pts.push_back(take_x ? a.x : a.y);
  const auto distinct = detail::distinct_points(pts);
  Marginal out{pts.select(distinct.first_row), std::vector<Rational>(distinct.size(), Rational(0)),
               distinct.id_of_row};
  for (std::size_t k = 0; k < atoms.size(); ++k) out.mass[distinct.id_of_row[k]] += atoms[k].mass;
  return out;
}

std::int64_t lcm_of_denominators(std::span<const Rational> values) {
  std::int64_t l = 1;
  for (const auto& v : values) l = std::lcm(l, v.denominator());
  return l;
}

std::int64_t scaled(const Rational& r, std::int64_t scale) {
  return r.numerator() * (scale / r.denominator());
}

double gini_of(const Marginal& m, const MetricSpec& metric) {
  long double acc = 0.0L;
  for (std::size_t a = 0; a < m.support.size(); ++a) {
    for (std::size_t b = a + 1; b < m.support.size(); ++b) {
      acc += 2.0L * boost::rational_cast<long double>(m.mass[a] * m.mass[b]) *
             distance(metric, m.support[a], m.support[b]);
    }
  }
  return static_cast<double>(acc);
}

}  // namespace

void DiscreteJoint::validate() const {
  if (atoms.empty()) throw Error("discrete joint law needs at least one atom");
  Rational total(0);
  for (const auto& a : atoms) {
    if (a.mass <= Rational(0)) throw Error("discrete joint law masses must be positive");
    if (a.x.size() != x_metric.point_dimension() || a.y.size() != y_metric.point_dimension()) {
      throw Error("discrete joint atom does not match the metric dimensions");
    }
    total += a.mass;
  }
  if (total != Rational(1)) {
    throw Error("discrete joint law masses sum to " + std::to_string(total.numerator()) + "/" +
                std::to_string(total.denominator()) + ", not 1");
  }
  PointBuffer xs(x_metric.point_dimension());
  PointBuffer ys(y_metric.point_dimension());
  for (const auto& a : atoms) {
    xs.push_back(a.x);
    ys.push_back(a.y);
  }
  check_conforms(x_metric, xs);
  check_conforms(y_metric, ys);
}

double discrete_ecov_exact(const DiscreteJoint& joint) {
  joint.validate();
  const auto mx = marginal_of(joint.atoms, joint.x_metric.point_dimension(), true);
  const auto my = marginal_of(joint.atoms, joint.y_metric.point_dimension(), false);

  // Merge joint atoms sitting on the same (x, y).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> supply_ids;
  std::vector<Rational> supply_mass;
  for (std::size_t k = 0; k < joint.atoms.size(); ++k) {
    const std::pair key{mx.id_of_atom[k], my.id_of_atom[k]};
    auto [it, inserted] = ids.try_emplace(key, supply_ids.size());
    if (inserted) {
      supply_ids.push_back(key);
      supply_mass.emplace_back(0);
    }
    supply_mass[it->second] += joint.atoms[k].mass;
  }
  std::vector<Rational> demand_mass;
  for (const auto& a : mx.mass) {
    for (const auto& b : my.mass) demand_mass.push_back(a * b);
  }
  const std::int64_t scale =
      std::lcm(lcm_of_denominators(supply_mass), lcm_of_denominators(demand_mass));

  TransportProblem p;
  for (const auto& m : supply_mass) p.supplies.push_back(scaled(m, scale));
  for (const auto& m : demand_mass) p.demands.push_back(scaled(m, scale));
  const std::size_t ny = my.support.size();
  p.costs = Matrix(supply_ids.size(), mx.support.size() * ny);
  for (std::size_t s = 0; s < supply_ids.size(); ++s) {
    const auto [sa, sb] = supply_ids[s];
    for (std::size_t a = 0; a < mx.support.size(); ++a) {
      for (std::size_t b = 0; b < ny; ++b) {
        p.costs(s, a * ny + b) = distance(joint.x_metric, mx.support[sa], mx.support[a]) +
                                 distance(joint.y_metric, my.support[sb], my.support[b]);
      }
    }
  }
  p.scale = static_cast<double>(scale);
  return solve_transport(p).total_cost;
}

double discrete_evar_x(const DiscreteJoint& joint) {
  joint.validate();
  return gini_of(marginal_of(joint.atoms, joint.x_metric.point_dimension(), true), joint.x_metric);
}

double discrete_evar_y(const DiscreteJoint& joint) {
  joint.validate();
  return gini_of(marginal_of(joint.atoms, joint.y_metric.point_dimension(), false),
                 joint.y_metric);
}

double discrete_ecor_exact(const DiscreteJoint& joint) {
  const double denom = std::min(discrete_evar_x(joint), discrete_evar_y(joint));
  if (!(denom > 0.0)) throw DegenerateError("eCor undefined: degenerate margin");
  return discrete_ecov_exact(joint) / denom;
}

double conditional_coupling_ecov(const DiscreteJoint& joint) {
  joint.validate();
  if (!detail::is_real_line(joint.y_metric)) {
    throw Error("conditional coupling needs a real Y margin under the absolute-value metric");
  }
  const auto mx = marginal_of(joint.atoms, joint.x_metric.point_dimension(), true);
  const auto my = marginal_of(joint.atoms, 1, false);
  std::vector<Rational> all_masses = my.mass;
  for (const auto& a : joint.atoms) all_masses.push_back(a.mass);
  const std::int64_t scale = lcm_of_denominators(all_masses);

  const auto y_support = my.support.reals();
  std::vector<std::int64_t> y_mass;
  for (const auto& m : my.mass) y_mass.push_back(scaled(m, scale));

  double acc = 0.0;
  for (std::size_t g = 0; g < mx.support.size(); ++g) {
    std::vector<double> values;
    std::vector<std::int64_t> masses;
    for (std::size_t k = 0; k < joint.atoms.size(); ++k) {
      if (mx.id_of_atom[k] != g) continue;
      values.push_back(joint.atoms[k].y[0]);
      masses.push_back(scaled(joint.atoms[k].mass, scale));
    }
    acc += boost::rational_cast<double>(mx.mass[g]) *
           wasserstein_1d_weighted(values, masses, y_support, y_mass);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Indicators.

void BernoulliPair::validate() const {
  const Rational zero(0);
  const Rational one(1);
  for (const auto* p : {&p_x, &p_y, &p_xy}) {
    if (*p < zero || *p > one) throw Error("Bernoulli probabilities must lie in [0, 1]");
  }
  const Rational low = std::max(zero, p_x + p_y - one);
  const Rational high = std::min(p_x, p_y);
  if (p_xy < low || p_xy > high) throw Error("p_xy violates the Fréchet bounds");
}

DiscreteJoint BernoulliPair::to_joint() const {
  validate();
  DiscreteJoint j{MetricSpec::euclidean(1), MetricSpec::euclidean(1), {}};
  const Rational one(1);
  const std::pair<double, double> cells[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const Rational masses[] = {one - p_x - p_y + p_xy, p_x - p_xy, p_y - p_xy, p_xy};
  for (std::size_t k = 0; k < 4; ++k) {
    if (masses[k] == Rational(0)) continue;
    j.atoms.push_back({{cells[k].first}, {cells[k].second}, masses[k]});
  }
  return j;
}

Rational bernoulli_ecov_closed_form(const BernoulliPair& b) {
  b.validate();
  return Rational(2) * abs(b.p_xy - b.p_x * b.p_y);
}

BernoulliDependence bernoulli_ecor_closed_form(const BernoulliPair& b) {
  const Rational ecov = bernoulli_ecov_closed_form(b);
  const Rational one(1);
  const Rational denom = std::min(b.p_x * (one - b.p_x), b.p_y * (one - b.p_y));
  if (denom == Rational(0)) throw DegenerateError("eCor undefined: degenerate margin");
  return {ecov, abs(b.p_xy - b.p_x * b.p_y) / denom};
}

// ---------------------------------------------------------------------------
// Bivariate normal.

double normal_evar(double sigma) {
  if (!(sigma > 0.0)) throw Error("standard deviation must be positive");
  return 2.0 * sigma / std::sqrt(std::numbers::pi);
}

GaussianEcorBounds gaussian_ecor_bounds(double rho, double sigma_x, double sigma_y) {
  if (!(std::abs(rho) <= 1.0)) throw Error("correlation must lie in [-1, 1]");
  GaussianEcorBounds b;
  b.evar_x = normal_evar(sigma_x);
  b.evar_y = normal_evar(sigma_y);
  b.upper = std::sqrt(std::max(0.0, 1.0 - std::sqrt(1.0 - rho * rho)));
  b.lower = sigma_x == sigma_y ? std::abs(1.0 - std::sqrt(1.0 - rho)) : 0.0;
  return b;
}

// ---------------------------------------------------------------------------

DependenceReport dependence_report(const PairedSample& sample) {
  DependenceReport r;
  r.n = sample.size();
  if (sample.trivariate()) {
    const auto sol = trivariate_ecov_solution(sample);
    r.ecov = sol.ecov;
    r.solver = sol.stats;
    r.evar_x = empirical_evar(sample.x());
    r.evar_y = empirical_evar(sample.y());
    r.evar_z = empirical_evar(sample.z());
    const double denom = std::min({r.evar_x, r.evar_y, *r.evar_z});
    if (!(denom > 0.0)) throw DegenerateError("eCor undefined: degenerate margin");
    r.ecor = r.ecov / denom;
    return r;
  }
  require_bivariate(sample, "dependence_report");
  r.evar_x = empirical_evar(sample.x());
  r.evar_y = empirical_evar(sample.y());
  const double denom = std::min(r.evar_x, r.evar_y);
  if (!(denom > 0.0)) throw DegenerateError("eCor undefined: degenerate margin");
  const auto sol = empirical_ecov_solution(sample);
  r.ecov = sol.ecov;
  r.solver = sol.stats;
  r.ecor = r.ecov / denom;
  r.upper_bound_theorem2 = denom;
  if (sample.x().metric == sample.y().metric) r.lower_bound_remark2 = ecov_lower_bound_remark2(sample);
  if (detail::is_real_line(sample.y().metric)) {
    r.conditional_upper_bound = conditional_coupling_ecov(sample);
  } else if (detail::is_real_line(sample.x().metric)) {
    r.conditional_upper_bound = conditional_coupling_ecov(sample.swapped());
  }
  try {
    r.dcor = distance_correlation(sample);
  } catch (const DegenerateError&) {
  }
  if (detail::is_real_line(sample.x().metric) && detail::is_real_line(sample.y().metric)) {
    try {
      r.pearson = pearson_correlation(sample.x().points.reals(), sample.y().points.reals());
    } catch (const DegenerateError&) {
    }
  }
  return r;
}

}  // namespace emdcor
