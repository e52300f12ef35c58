#include "emdcor/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "emdcor/baselines.hpp"
#include "emdcor/dependence.hpp"
#include "emdcor/error.hpp"
#include "emdcor/inference.hpp"
#include "emdcor/random.hpp"
#include "emdcor/transport.hpp"
#include "emdcor/univariate.hpp"

namespace emdcor {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::vector<double> reals(RandomStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = -5.0 + 10.0 * rng.uniform();
  return v;
}

std::vector<double> ties(RandomStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.below(4));
  return v;
}

// Mixed metrics, with ties about a third of the time.
PairedSample random_sample(RandomStream& rng, std::size_t n) {
  auto margin = [&]() -> Margin {
    switch (rng.below(4)) {
      case 0: return {MetricSpec::euclidean(1), PointBuffer::from_reals(reals(rng, n))};
      case 1: return {MetricSpec::euclidean(1), PointBuffer::from_reals(ties(rng, n))};
      case 2: return {MetricSpec::euclidean(2), PointBuffer(2, reals(rng, 2 * n))};
      default: return {MetricSpec::manhattan(2), PointBuffer(2, reals(rng, 2 * n))};
    }
  };
  while (true) {
    Margin x = margin();
    Margin y = margin();
    if (empirical_evar(x) > 0.0 && empirical_evar(y) > 0.0) return {x, y};
  }
}

ValidationCheck four_points() {
  const std::vector<double> xs{1, 2, 3, 4};
  const std::vector<double> ys{4, 2, 3, 1};
  const auto s = PairedSample::from_reals(xs, ys);
  const double ecov = empirical_ecov(s);
  const double ecor = empirical_ecor(s);
  const bool ok = std::abs(ecov - 1.0) <= 1e-9 && std::abs(ecor - 0.8) <= 1e-9 &&
                  empirical_evar(s.x()) == 1.25 && empirical_evar(s.y()) == 1.25;
  return {"four-point example", ok, fmt("ecov %.12g, ecor %.12g", ecov, ecor)};
}

ValidationCheck bernoulli() {
  double worst = 0.0;
  int count = 0;
  for (int px = 1; px < 10; ++px) {
    for (int py = 1; py < 10; ++py) {
      for (int pxy = std::max(0, px + py - 10); pxy <= std::min(px, py); ++pxy) {
        const BernoulliPair b{Rational(px, 10), Rational(py, 10), Rational(pxy, 10)};
        const auto closed = bernoulli_ecor_closed_form(b);
        const auto joint = b.to_joint();
        worst = std::max(worst, std::abs(discrete_ecov_exact(joint) -
                                         boost::rational_cast<double>(closed.ecov)));
        worst = std::max(worst, std::abs(discrete_ecor_exact(joint) -
                                         boost::rational_cast<double>(closed.ecor)));
        ++count;
      }
    }
  }
  return {"Bernoulli closed form", count >= 50 && worst <= 1e-9,
          fmt("%.0f triples, max deviation %.3g", count, worst)};
}

ValidationCheck gini(RandomStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto xs = reals(rng, 1 + rng.below(200));
    long double pairwise = 0.0L;
    for (double a : xs) {
      for (double b : xs) pairwise += std::abs(a - b);
    }
    const auto n = static_cast<long double>(xs.size());
    const auto p = static_cast<double>(pairwise / (n * n));
    worst = std::max({worst, std::abs(gini_mean_difference(xs) - p),
                      std::abs(evar_cdf_integral(xs) - p)});
  }
  return {"Gini mean difference forms", worst <= 1e-10, fmt("max deviation %.3g", worst)};
}

ValidationCheck self_pairs(RandomStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto s = random_sample(rng, 2 + rng.below(29));
    worst = std::max(worst, std::abs(empirical_ecov(PairedSample(s.x(), s.x())) -
                                     empirical_evar(s.x())));
  }
  return {"evar equals self-paired ecov", worst <= 1e-8, fmt("max deviation %.3g", worst)};
}

ValidationCheck bounds(RandomStream& rng) {
  double worst = -1e300;
  for (int t = 0; t < 200; ++t) {
    const auto r = dependence_report(random_sample(rng, 2 + rng.below(24)));
    worst = std::max(worst, r.ecov - *r.upper_bound_theorem2);
    if (r.lower_bound_remark2) worst = std::max(worst, *r.lower_bound_remark2 - r.ecov);
    if (r.conditional_upper_bound) worst = std::max(worst, r.ecov - *r.conditional_upper_bound);
  }
  return {"ecov bounds", worst <= 1e-9, fmt("largest bound violation %.3g", worst)};
}

ValidationCheck similarity(RandomStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t dim = 1 + rng.below(2);
    const auto m = MetricSpec::euclidean(dim);
    const std::size_t n = 3 + rng.below(10);
    const Margin x{m, PointBuffer(dim, reals(rng, n * dim))};
    const Margin y{m, PointBuffer(dim, reals(rng, n * dim))};
    Similarity f = Similarity::identity(dim);
    f.scale = 0.25 + 4.0 * rng.uniform();
    if (dim == 1) {
      f.orthogonal(0, 0) = rng.below(2) == 0 ? 1.0 : -1.0;
    } else {
      const double a = 6.283185307179586 * rng.uniform();
      f.orthogonal(0, 0) = std::cos(a);
      f.orthogonal(0, 1) = -std::sin(a);
      f.orthogonal(1, 0) = std::sin(a);
      f.orthogonal(1, 1) = std::cos(a);
    }
    for (auto& b : f.translation) b = -10.0 + 20.0 * rng.uniform();
    const Margin fx{m, apply_similarity(f, m, x.points)};
    const Margin fy{m, apply_similarity(f, m, y.points)};
    worst = std::max({worst,
                      std::abs(empirical_ecor(PairedSample(fx, fy)) -
                               empirical_ecor(PairedSample(x, y))),
                      std::abs(empirical_ecor(PairedSample(x, fx)) - 1.0)});
  }
  return {"similarity invariance", worst <= 1e-8, fmt("max deviation %.3g", worst)};
}

ValidationCheck oracle(RandomStream& rng) {
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(2);
    const auto p = build_product_measure(PairedSample::from_reals(ties(rng, n), reals(rng, n)));
    if (std::abs(solve_transport(p.problem).total_cost - brute_force_transport(p.problem).cost) >
        1e-12) {
      ++mismatches;
    }
  }
  for (int t = 0; t < 100; ++t) {
    TransportProblem p;
    const std::size_t s = 1 + rng.below(3);
    const std::size_t d = 1 + rng.below(3);
    const std::int64_t units = static_cast<std::int64_t>(std::max(s, d) + rng.below(4));
    p.supplies.assign(s, 1);
    p.demands.assign(d, 1);
    for (auto k = static_cast<std::int64_t>(s); k < units; ++k) ++p.supplies[rng.below(s)];
    for (auto k = static_cast<std::int64_t>(d); k < units; ++k) ++p.demands[rng.below(d)];
    p.costs = Matrix(s, d);
    for (auto& c : p.costs.data()) c = static_cast<double>(rng.below(10));
    if (solve_transport(p).total_cost != brute_force_transport(p).cost) ++mismatches;
  }
  return {"solver against enumeration", mismatches == 0, fmt("%.0f mismatches", mismatches)};
}

ValidationCheck wasserstein(RandomStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const auto xs = reals(rng, n);
    const auto ys = reals(rng, n);
    TransportProblem p;
    p.supplies.assign(n, 1);
    p.demands.assign(n, 1);
    p.costs = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.costs(i, j) = std::abs(xs[i] - ys[j]);
    }
    p.scale = static_cast<double>(n);
    worst = std::max(worst, std::abs(wasserstein_1d(xs, ys) - solve_transport(p).total_cost));
  }
  return {"1-D Wasserstein", worst <= 1e-9, fmt("max deviation %.3g", worst)};
}

ValidationCheck cube(std::uint64_t seed) {
  const double one = cube_evar_erf_integral(1);
  bool ok = std::abs(one - 1.0 / 3.0) <= 1e-6;
  double worst = 0.0;
  for (int n : {2, 3}) {
    const auto c = mc_validate_cube(n, 1'000'000, RandomStream::mix(seed + static_cast<std::uint64_t>(n)));
    worst = std::max(worst, std::abs(c.estimate - c.quadrature));
    ok = ok && c.quadrature >= c.lower_bound && c.quadrature <= c.upper_bound;
  }
  ok = ok && worst <= 0.003;
  return {"unit cube evar", ok, fmt("n=1 %.9f, Monte Carlo gap %.3g", one, worst)};
}

ValidationCheck gaussian(double rho, std::uint64_t seed) {
  const auto g = mc_validate_gaussian(rho, 30, 50, seed);
  const bool ok = g.mean <= g.bounds.upper + 0.15 && g.mean >= g.bounds.lower - 0.15;
  char name[64];
  std::snprintf(name, sizeof name, "Gaussian rho=%.1f", rho);
  char detail[160];
  std::snprintf(detail, sizeof detail, "mean ecor %.4f, window [%.4f, %.4f]", g.mean,
                g.bounds.lower - 0.15, g.bounds.upper + 0.15);
  return {name, ok, detail};
}

ValidationCheck trivariate() {
  const std::vector<double> c{0, 1};
  const auto s = PairedSample::from_reals(c, c, c);
  const double ecov = trivariate_ecov(s);
  const double ecor = trivariate_ecor(s);
  std::vector<double> xs, ys, zs;
  for (int k = 0; k < 8; ++k) {
    xs.push_back(k & 1);
    ys.push_back((k >> 1) & 1);
    zs.push_back((k >> 2) & 1);
  }
  const double grid = trivariate_ecov(PairedSample::from_reals(xs, ys, zs));
  return {"three-variable ecov", ecov == 0.75 && ecor == 1.5 && grid == 0.0,
          fmt("corners %.12g, grid %.3g", ecov, grid)};
}

ValidationCheck permutation(std::uint64_t seed) {
  std::vector<double> xs(20);
  std::iota(xs.begin(), xs.end(), 0.0);
  PermutationOptions o;
  o.permutations = 199;
  o.seed = seed;
  const double dependent = permutation_test_ecov(PairedSample::from_reals(xs, xs), o).p_value;
  std::array<int, 10> deciles{};
  o.permutations = 39;
  for (std::uint64_t run = 0; run < 200; ++run) {
    auto rng = RandomStream::substream(seed ^ 0xabcdef, run);
    o.seed = RandomStream::mix(seed + run);
    const double p =
        permutation_test_ecov(PairedSample::from_reals(reals(rng, 10), reals(rng, 10)), o).p_value;
    ++deciles[std::min<std::size_t>(9, static_cast<std::size_t>(std::ceil(p * 10.0)) - 1)];
  }
  const auto empty = std::count(deciles.begin(), deciles.end(), 0);
  return {"permutation test", dependent <= 0.01 && empty == 0,
          fmt("p(y = x) %.4f, empty deciles %.0f", dependent, static_cast<double>(empty))};
}

ValidationCheck dcor() {
  const std::vector<double> xs{0.5, -1, 2, 7, 3};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2 * x + 3);
  const double r = distance_correlation(PairedSample::from_reals(xs, ys));
  const std::vector<double> d{0, 1};
  const double v = distance_covariance(PairedSample::from_reals(d, d));
  return {"distance correlation", std::abs(r - 1.0) <= 1e-9 && std::abs(v - 0.5) <= 1e-12,
          fmt("dCor %.12g, dCov %.12g", r, v)};
}

}  // namespace

std::vector<ValidationCheck> run_validation(std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<ValidationCheck> out;
  out.push_back(four_points());
  out.push_back(bernoulli());
  out.push_back(gini(rng));
  out.push_back(self_pairs(rng));
  out.push_back(bounds(rng));
  out.push_back(similarity(rng));
  out.push_back(oracle(rng));
  out.push_back(wasserstein(rng));
  out.push_back(cube(seed));
  for (double rho : {0.3, 0.6, 0.9}) {
    out.push_back(gaussian(rho, RandomStream::mix(seed ^ static_cast<std::uint64_t>(rho * 10))));
  }
  out.push_back(trivariate());
  out.push_back(permutation(seed));
  out.push_back(dcor());
  return out;
}

}  // namespace emdcor
