#include "lanelab/pohozaev.hpp"

#include <cmath>

namespace lanelab {
namespace pohozaev {

Field with_fd_gradient(std::function<double(const Point&)> value, double h) {
  Field f;
  f.value = value;
  f.grad = [value, h](const Point& x) {
    Point g(x.size());
    Point xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xp[i] += h;
      xm[i] -= h;
      g[i] = (value(xp) - value(xm)) / (2.0 * h);
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return g;
  };
  return f;
}

PohozaevResult pohozaev_residual(const Field& u, const Field& v, const Point& center,
                                 double radius, int j, double p, double q, int order) {
  const int n = static_cast<int>(center.size());
  SurfaceQuadrature sq(n, center, radius, order);
  PohozaevResult res;
  res.L = sq.integrate([&](const Point& x, const Point& nu) {
    const Point gu = u.grad(x), gv = v.grad(x);
    const double dun = dot(gu, nu), dvn = dot(gv, nu);
    return -(dun * gv[j] + dvn * gu[j]) + dot(gu, gv) * nu[j];
  });
  res.R = sq.integrate([&](const Point& x, const Point& nu) {
    const double uv = u.value(x), vv = v.value(x);
    return std::pow(vv, p + 1.0) * nu[j] / (p + 1.0) +
           std::pow(uv, q + 1.0) * nu[j] / (q + 1.0);
  });
  res.residual = res.L - res.R;
  return res;
}

FluxReport flux_constancy(const Field& A, const Field& B, const Point& center,
                          const std::vector<double>& r_list, int j, int order) {
  const int n = static_cast<int>(center.size());
  FluxReport rep;
  for (double r : r_list) {
    SurfaceQuadrature sq(n, center, r, order);
    const double I = sq.integrate([&](const Point& x, const Point& nu) {
      const Point ga = A.grad(x), gb = B.grad(x);
      return dot(ga, nu) * gb[j] + dot(gb, nu) * ga[j] - dot(ga, gb) * nu[j];
    });
    rep.rows.push_back({r, I});
  }
  double mn = rep.rows.front().I, mx = mn;
  for (const auto& row : rep.rows) {
    mn = std::min(mn, row.I);
    mx = std::max(mx, row.I);
  }
  rep.spread = mx - mn;
  return rep;
}

double sphere_rule_moment_error(int n, int order) {
  Point c(n, 0.0);
  SurfaceQuadrature sq(n, c, 1.0, order);
  const double area = unit_sphere_area(n);
  double worst = 0.0;
  if (n == 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double m =
            sq.integrate([&](const Point& x, const Point&) { return x[i] * x[j]; });
        const double expect = (i == j) ? area / n : 0.0;
        worst = std::max(worst, std::abs(m - expect));
      }
    return worst;
  }
  // n > 3: zonal rule; exactness on zonal moments
  const double m0 = sq.integrate([](const Point&, const Point&) { return 1.0; });
  const double m2 =
      sq.integrate([&](const Point& x, const Point&) { return x[0] * x[0]; });
  const double m4 = sq.integrate(
      [&](const Point& x, const Point&) { return std::pow(x[0], 4.0); });
  worst = std::max({std::abs(m0 - area), std::abs(m2 - area / n),
                    std::abs(m4 - 3.0 * area / (n * (n + 2.0)))});
  return worst;
}

}  // namespace pohozaev
}  // namespace lanelab
