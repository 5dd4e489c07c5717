#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lanelab/halfspace.hpp"

using namespace lanelab;
using namespace lanelab::halfspace;

namespace {
double alpha1_p1(int n) { return newton_c(n) / (2.0 * (n - 4.0)); }
}

TEST_CASE("rhs boundary pieces against Beta-function values") {
  CriterionConfig cfg;
  auto ac5 = gtilde_field::alpha_constants(5, 1.0);
  auto r5 = rhs_integral(5, 1.0, ac5, cfg);
  // int_{R^4} 2 (1+|y|^2)^{-3} = 2 |S^3| * 1/4 = pi^2
  CHECK(r5.piece_boundary == doctest::Approx(M_PI * M_PI).epsilon(1e-12));
  // int_{R^4} 10 (1+|y|^2)^{-4} = 10 |S^3| / 12 = (5/3) pi^2
  CHECK(r5.piece_second == doctest::Approx(5.0 * M_PI * M_PI / 3.0).epsilon(1e-12));
  CHECK(r5.alpha_eff == doctest::Approx(alpha1_p1(5)).epsilon(1e-14));

  auto ac6 = gtilde_field::alpha_constants(6, 1.0);
  auto r6 = rhs_integral(6, 1.0, ac6, cfg);
  CHECK(r6.piece_boundary == doctest::Approx(std::pow(M_PI, 3) / 6.0).epsilon(1e-12));
  CHECK(r6.piece_second == doctest::Approx(3.0 * std::pow(M_PI, 3) / 8.0).epsilon(1e-12));

  // alpha1 = 0 forces the RHS to vanish
  auto ac0 = ac5;
  ac0.alpha1 = 0.0;
  CHECK(rhs_integral(5, 1.0, ac0, cfg).value == doctest::Approx(0.0));
}

TEST_CASE("lhs integral: sanity modes and self-convergence") {
  CriterionConfig cfg;
  // p formally 0: the branch bracket vanishes identically
  CHECK(lhs_integral(5, 0.0, cfg).value == 0.0);

  // closed form at p = 1: W0 = alpha1 |x+e_n|^{4-n}, hence F(1) = 0 exactly
  auto F = lhs_integral(5, 1.0, cfg);
  CHECK(std::abs(F.value) <= 3.0 * F.err);

  // self-convergence within error bars under R and shell refinement (p = 1.15)
  CriterionConfig c1 = cfg, c2 = cfg;
  c1.R_trunc = 50.0;
  c1.shell_eps = 1e-2;
  c2.R_trunc = 100.0;
  c2.shell_eps = 1e-3;
  auto f1 = lhs_integral(5, 1.15, c1);
  auto f2 = lhs_integral(5, 1.15, c2);
  CHECK(std::abs(f1.value - f2.value) <= f1.err + f2.err);
  CHECK(std::abs(f1.value - f2.value) <= 0.01 * std::abs(f2.value));

  CHECK_THROWS_AS(lhs_integral(4, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(lhs_integral(5, 1.7, cfg), std::invalid_argument);
}

TEST_CASE("reflection antisymmetry of the axial kernel") {
  // K(zbar, -z_n) = -K(zbar, z_n); checked through the Htilde0 evaluator's
  // building blocks by direct evaluation
  auto K = [](int n, double rho, double t) {
    const double rm2 = rho * rho + (t - 1.0) * (t - 1.0);
    const double rp2 = rho * rho + (t + 1.0) * (t + 1.0);
    return (1.0 - t) * std::pow(rm2, -0.5 * n) - (1.0 + t) * std::pow(rp2, -0.5 * n);
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> un(0.1, 3.0);
  for (int k = 0; k < 50; ++k) {
    const double rho = un(rng), t = un(rng);
    CHECK(std::abs(K(5, rho, t) + K(5, rho, -t)) <= 1e-15 * std::abs(K(5, rho, t)));
  }
}

TEST_CASE("Htilde0 axis values: closed form at p = 1") {
  CriterionConfig cfg;
  for (int n : {5, 6}) {
    const double a1 = alpha1_p1(n);
    for (auto [tx, ty] : {std::pair<double, double>{1.0, 1.0},
                          {0.5, 0.5},
                          {2.0, 2.0},
                          {0.8, 1.0},
                          {3.0, 0.4}}) {
      auto h = htilde0_axis(tx, ty, n, 1.0, cfg);
      const double exact = a1 * std::pow(tx + ty, 4.0 - n);
      CHECK(std::abs(h.value - exact) <= std::max(3.0 * h.err, 2e-4 * exact));
    }
  }
  CHECK_THROWS_AS(htilde0_axis(-1.0, 1.0, 5, 1.0, cfg), std::invalid_argument);
}

TEST_CASE("w0 derivative: representation vs closed form") {
  CriterionConfig cfg;
  auto w = w0_derivative(5, 1.0, cfg);
  const double exact = alpha1_p1(5) * (4.0 - 5.0) * std::pow(2.0, 3 - 5);
  CHECK(w.total == doctest::Approx(exact).epsilon(1e-4));
  CHECK(w.total < 0.0);
  // dI2 = -pi^2 c_5^2 exactly at (5,1)
  const double c5 = newton_c(5);
  CHECK(w.dI2 == doctest::Approx(-M_PI * M_PI * c5 * c5).epsilon(1e-12));
  // positive source and boundary data: W0 > 0 away from e_n
  auto far = w0_axis(3.0, 5, 1.0, cfg);
  CHECK(far.value > 0.0);
}

TEST_CASE("criterion verdict and equivalence with the derivative route") {
  CriterionConfig cfg;
  auto rep = criterion(5, 1.0, cfg);
  CHECK(rep.verdict == Verdict::holds);
  CHECK(rep.diff < 0.0);
  CHECK(rep.dW0 < 0.0);
  CHECK(rep.Gv == doctest::Approx(M_PI * M_PI / 3.0).epsilon(1e-10));

  auto w = w0_derivative(5, 1.0, cfg);
  const double cnp1 = 3.0 * std::pow(newton_c(5), 2.0);
  CHECK(std::abs(w.total - cnp1 * rep.diff) <= 3.0 * (w.err + cnp1 * rep.err));

  // verdict stable under tolerance tightening
  CriterionConfig tight = cfg;
  tight.tol = cfg.tol * 0.1;
  tight.n_theta = 2 * cfg.n_theta;
  CHECK(criterion(5, 1.0, tight).verdict == rep.verdict);

  CHECK_THROWS_AS(criterion(4, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(criterion(5, 0.9, cfg), std::invalid_argument);

  // high branch (eq-as-1 path) evaluates finitely and keeps the verdict
  auto hb = criterion(5, 1.45, cfg);
  CHECK(std::isfinite(hb.F));
  CHECK(std::isfinite(hb.Gv));
  MESSAGE("high-branch diff ", hb.diff);
}

TEST_CASE("p = 1 scaling identity for n in {5,6}") {
  CriterionConfig cfg;
  for (int n : {5, 6}) {
    auto sc = p1_scaling_check(n, cfg);
    CHECK(std::abs(sc.ratio - 1.0) <= 0.02);
    CHECK(sc.scaling_spread <= 0.01);
    CHECK(sc.route_scaling < 0.0);
  }
}

TEST_CASE("continuity scan") {
  CriterionConfig cfg;
  auto scan = continuity_scan(5, {1.0, 1.1, 1.2, 1.3}, cfg);
  for (const auto& row : scan.rows) {
    CHECK(std::isfinite(row.F));
    CHECK(std::isfinite(row.Gv));
    CHECK(row.verdict == Verdict::holds);
  }
  CHECK(scan.max_dF_dp < 100.0);
  CHECK(scan.sign_persist_until == doctest::Approx(1.3));
}

TEST_CASE("axisymmetric reduction against full-dimension Monte Carlo") {
  // independent estimate of int K.B over {|z-e_n| < R, z_n > 0} by importance
  // sampling (log-uniform radius, uniform direction in R^n)
  const int n = 5;
  const double p = 1.2;
  const double R = 60.0;
  CriterionConfig cfg;
  cfg.R_trunc = R;
  auto F = lhs_integral(n, p, cfg);

  auto bracket = [&](const std::vector<double>& z) {
    double rm2 = 0, rp2 = 0;
    for (int i = 0; i < n; ++i) {
      const double em = (i == n - 1) ? 1.0 : 0.0;
      rm2 += (z[i] - em) * (z[i] - em);
      rp2 += (z[i] + em) * (z[i] + em);
    }
    const double rm = std::sqrt(rm2), rp = std::sqrt(rp2);
    const double b = std::pow(rm, 2 - n), c = std::pow(rp, 2 - n);
    const double K = (1.0 - z[n - 1]) * std::pow(rm, -double(n)) -
                     (1.0 + z[n - 1]) * std::pow(rp, -double(n));
    return K * (std::pow(b - c, p) - std::pow(b, p));
  };

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double s0 = 1e-5, s1 = R;
  const double L = std::log(s1 / s0);
  const long N = 4000000;
  double sum = 0.0, sum2 = 0.0;
  const double area = unit_sphere_area(n);
  for (long k = 0; k < N; ++k) {
    const double s = s0 * std::exp(L * uni(rng));
    std::vector<double> w(n);
    double nw = 0.0;
    for (auto& c : w) {
      c = gauss(rng);
      nw += c * c;
    }
    nw = std::sqrt(nw);
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = (i == n - 1 ? 1.0 : 0.0) + s * w[i] / nw;
    double val = 0.0;
    if (z[n - 1] > 0.0) val = bracket(z) * area * std::pow(s, double(n)) * L;
    sum += val;
    sum2 += val * val;
  }
  const double mean = sum / N;
  const double stderr_ = std::sqrt((sum2 / N - mean * mean) / N);
  CHECK(std::abs(mean - F.value) <= 3.0 * (stderr_ + F.err));
  MESSAGE("MC ", mean, " +- ", stderr_, " vs quad ", F.value);
}

TEST_CASE("rescaled ball field converges to the half-space field") {
  const int n = 5;
  const double p = 1.0;
  Point c(n, 0.0);
  c[n - 1] = 4.0;
  BallDomain dom(n, c, 4.0);
  CriterionConfig cfg;
  auto probe = rescaled_convergence_probe({0.2, 0.1, 0.05}, n, p, dom, cfg);
  REQUIRE(probe.rows.size() == 3);
  CHECK(probe.decreasing);
  // the two routes agree at e_n for the smallest kappa
  CHECK(std::abs(probe.wk_extrap_at_en - probe.w0_at_en) <=
        std::max(3.0 * probe.err, 0.05 * std::abs(probe.w0_at_en)));
  // patch shrink cannot increase the sup distance (sup over a subset)
  CHECK(probe.rows.back().sup_dist >= 0.0);

  BallDomain wrong(n, 4.0);  // centered at the origin, not tangent
  CHECK_THROWS_AS(rescaled_convergence_probe({0.1}, n, p, wrong, cfg),
                  std::invalid_argument);
}
