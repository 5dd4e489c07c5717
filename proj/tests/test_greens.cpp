#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lanelab/greens.hpp"
#include "lanelab/quadrature.hpp"

using namespace lanelab;
using namespace lanelab::greens_ball;

TEST_CASE("image-method values on the unit 3-ball") {
  BallDomain B(3, 1.0);
  const double c3 = newton_c(3);
  CHECK(c3 == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-15));

  Point x = {0.5, 0.0, 0.0}, ctr = {0.0, 0.0, 0.0};
  auto ev = greens(x, ctr, B);
  CHECK(ev.G == doctest::Approx(c3 * (1.0 / 0.5 - 1.0)).epsilon(1e-14));

  // Dirichlet boundary: vanishes at machine distance, O(d) at d = 1e-6
  Point y = {0.3, 0.1, 0.0};
  CHECK(std::abs(greens({1.0 - 1e-12, 0.0, 0.0}, y, B).G) <= 1e-10);
  CHECK(std::abs(greens({1.0 - 1e-6, 0.0, 0.0}, y, B).G) <= 1e-5);

  CHECK_THROWS_AS(greens(x, x, B), std::invalid_argument);
  CHECK_THROWS_AS(greens({1.5, 0.0, 0.0}, y, B), std::invalid_argument);
}

TEST_CASE("symmetry and upper bound on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> un(-0.6, 0.6);
  for (int n : {3, 5}) {
    BallDomain B(n, 1.0);
    for (int k = 0; k < 30; ++k) {
      Point a(n), b(n);
      for (auto& c : a) c = un(rng) / std::sqrt(double(n));
      for (auto& c : b) c = un(rng) / std::sqrt(double(n));
      if (dist(a, b) < 1e-2) continue;
      auto eab = greens(a, b, B), eba = greens(b, a, B);
      CHECK(std::abs(eab.G - eba.G) <= 1e-12);
      CHECK(eab.G > 0.0);
      // strict domain bound G < c_n |x-y|^{2-n}
      CHECK(eab.G < eab.c_n * std::pow(dist(a, b), 2 - n));
      CHECK(eab.H > 0.0);
    }
  }
}

TEST_CASE("regular part is harmonic") {
  BallDomain B(3, 1.0);
  Point y = {0.25, -0.2, 0.1};
  const double h = 1e-3;
  for (Point x : {Point{0.1, 0.2, -0.3}, Point{-0.4, 0.1, 0.2}}) {
    double lap = -6.0 * regular_part(x, y, B);
    for (int i = 0; i < 3; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      lap += regular_part(xp, y, B) + regular_part(xm, y, B);
    }
    CHECK(std::abs(lap / (h * h)) <= 1e-4);
  }
  // analytic gradient against finite differences
  Point x = {0.2, 0.3, -0.1};
  auto g = grad_x_regular_part(x, y, B);
  for (int i = 0; i < 3; ++i) {
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (regular_part(xp, y, B) - regular_part(xm, y, B)) / (2 * h);
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("robin function and its one-slot gradient") {
  BallDomain B(3, 1.0);
  const double c3 = newton_c(3);
  auto r0 = robin({0.0, 0.0, 0.0}, B);
  CHECK(r0.H_xx == doctest::Approx(c3).epsilon(1e-14));
  CHECK(norm(r0.grad1_H) <= 1e-15);

  // any ball: gradient vanishes at the center
  BallDomain B4(4, Point{0.3, -0.2, 0.0, 0.1}, 2.5);
  CHECK(norm(robin(B4.center, B4).grad1_H) <= 1e-15);

  // d = 0.05: reflected-point asymptote within 5%
  auto r1 = robin({0.95, 0.0, 0.0}, B);
  const double lead = c3 / (2.0 * 0.05) / (2.0 * 0.05);
  CHECK(r1.grad1_H[0] == doctest::Approx(lead).epsilon(0.05));
}

TEST_CASE("reflected point frame") {
  BallDomain B(3, 1.0);
  auto fr = reflected_point({0.9, 0.0, 0.0}, B);
  CHECK(fr.d == doctest::Approx(0.1));
  CHECK(fr.n_x[0] == doctest::Approx(1.0));
  CHECK(fr.x_star[0] == doctest::Approx(1.1));
  auto fr2 = reflected_point({0.0, 0.5, 0.0}, B);
  CHECK(fr2.x_star[1] == doctest::Approx(1.5));
  CHECK_THROWS_AS(reflected_point({0.0, 0.0, 0.0}, B), std::invalid_argument);
  // x_star lies outside and is rejected as an evaluation point
  CHECK_THROWS_AS(greens(fr.x_star, {0.1, 0.0, 0.0}, B), std::invalid_argument);
  // Kelvin image is a different point
  Point kp = kelvin_point({0.9, 0.0, 0.0}, B);
  CHECK(std::abs(kp[0] - 1.0 / 0.9) <= 1e-14);
  CHECK(dist(kp, fr.x_star) > 1e-3);
}

TEST_CASE("boundary asymptotics ratios") {
  for (int n : {3, 4}) {
    BallDomain B(n, 1.0);
    auto rep = verify_boundary_asymptotics(B, {0.01});
    CHECK(std::abs(rep.rows[0].ratio_H - 1.0) <= 0.02);
    CHECK(std::abs(rep.rows[0].ratio_dH - 1.0) <= 0.02);
  }
  // d -> radius/4: deviation allowed but bounded (O-bound, not o-bound)
  BallDomain B(3, 1.0);
  auto far = verify_boundary_asymptotics(B, {0.25});
  CHECK(std::abs(far.rows[0].ratio_H - 1.0) < 0.5);
  CHECK(std::abs(far.rows[0].ratio_dH - 1.0) < 0.5);
  CHECK(std::isfinite(far.fitted_O_H));

  // lower bound of the normal derivative on the (2d)^{1-n} scale, d <= 0.1R;
  // the literal d^{-(n-1)} scale caps at 2^{2-n} and cannot hold
  std::vector<double> dg;
  for (int k = 0; k < 20; ++k) dg.push_back(0.1 * std::pow(0.75, k));
  auto rep = verify_boundary_asymptotics(B, dg);
  for (const auto& row : rep.rows) {
    CHECK(row.hn_margin_2d >= 1.0);
    CHECK(row.hn_margin_lit <= 0.51);
  }
}

TEST_CASE("Poisson kernel on the sphere") {
  BallDomain B(3, 1.0);
  Point ctr(3, 0.0);
  const double area = unit_sphere_area(3);
  SurfaceQuadrature sq(3, ctr, 1.0, 48);
  // mean-value property at the center
  for (int k = 0; k < 5; ++k) {
    const auto& w = sq.pts[k * 37 % sq.pts.size()].x;
    CHECK(poisson_kernel(ctr, w, B) == doctest::Approx(1.0 / area).epsilon(1e-13));
  }
  // harmonic extension of 1
  for (Point x : {Point{0.3, 0.1, -0.2}, Point{0.0, 0.7, 0.0}}) {
    const double total = sq.integrate(
        [&](const Point& w, const Point&) { return poisson_kernel(x, w, B); });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    // kernel bound K |x-w|^n / d(x) over the node grid
    double sup = 0.0;
    for (const auto& pw : sq.pts)
      sup = std::max(sup, poisson_kernel(x, pw.x, B) * std::pow(dist(x, pw.x), 3) /
                              B.boundary_dist(x));
    CHECK(sup <= 4.0);
  }
  CHECK_THROWS_AS(poisson_kernel(ctr, Point{0.5, 0.0, 0.0}, B), std::invalid_argument);
}

TEST_CASE("difference function bound is grid-stable") {
  BallDomain B(3, 1.0);
  const double c1 = difference_bound_constant(B, 5, 0.2);
  const double c2 = difference_bound_constant(B, 9, 0.15);
  CHECK(std::isfinite(c1));
  CHECK(std::isfinite(c2));
  CHECK(c1 > 0.0);
  // boundedness asserted, not the value: fits agree within a factor 2
  CHECK(std::max(c1, c2) / std::min(c1, c2) <= 2.0);
}
