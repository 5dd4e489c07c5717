#include "lanelab/greens.hpp"

#include <cmath>
#include <stdexcept>

namespace lanelab {
namespace greens_ball {

namespace {

void check_inside(const Point& x, const BallDomain& dom, const char* who) {
  if (static_cast<int>(x.size()) != dom.n)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (!dom.contains(x))
    throw std::invalid_argument(std::string(who) + ": point outside the ball");
}

// rho(x,y) with center-shifted coordinates; symmetric in x,y.
double rho_sym(const Point& xs, const Point& ys, double R) {
  const double xx = dot(xs, xs), yy = dot(ys, ys), xy = dot(xs, ys);
  return std::sqrt(std::max(xx * yy / (R * R) - 2.0 * xy + R * R, 0.0));
}

}  // namespace

double regular_part(const Point& x, const Point& y, const BallDomain& dom) {
  const Point xs = sub(x, dom.center), ys = sub(y, dom.center);
  const double cn = newton_c(dom.n);
  return cn * std::pow(rho_sym(xs, ys, dom.radius), 2 - dom.n);
}

Point grad_x_regular_part(const Point& x, const Point& y, const BallDomain& dom) {
  const int n = dom.n;
  const Point xs = sub(x, dom.center), ys = sub(y, dom.center);
  const double R = dom.radius;
  const double rho = rho_sym(xs, ys, R);
  const double cn = newton_c(n);
  // grad_x rho^2 = 2 x |y|^2/R^2 - 2 y
  const double yy = dot(ys, ys);
  Point g(n);
  const double c = cn * 0.5 * (2.0 - n) * std::pow(rho, -n);
  for (int i = 0; i < n; ++i) g[i] = c * (2.0 * xs[i] * yy / (R * R) - 2.0 * ys[i]);
  return g;
}

GreensEval greens(const Point& x, const Point& y, const BallDomain& dom) {
  check_inside(x, dom, "greens(x)");
  check_inside(y, dom, "greens(y)");
  const int n = dom.n;
  const double r = dist(x, y);
  if (r == 0.0) throw std::invalid_argument("greens: x == y");
  GreensEval ev;
  ev.c_n = newton_c(n);
  ev.H = regular_part(x, y, dom);
  ev.grad_x_H = grad_x_regular_part(x, y, dom);
  ev.G = ev.c_n * std::pow(r, 2 - n) - ev.H;
  ev.grad_x_G.resize(n);
  const double cs = ev.c_n * (2 - n) * std::pow(r, -n);
  for (int i = 0; i < n; ++i) ev.grad_x_G[i] = cs * (x[i] - y[i]) - ev.grad_x_H[i];
  return ev;
}

RobinEval robin(const Point& x, const BallDomain& dom) {
  check_inside(x, dom, "robin");
  const int n = dom.n;
  const double R = dom.radius;
  const Point xs = sub(x, dom.center);
  const double ax = norm(xs);
  const double cn = newton_c(n);
  RobinEval ev;
  // H(x,x) = c_n R^{n-2} (R^2-|x|^2)^{2-n}
  ev.H_xx = cn * std::pow(R, n - 2) * std::pow(R * R - ax * ax, 2.0 - n);
  // grad_x H(x,y)|_{y=x} = (n-2) c_n R^{n-2} (R^2-|x|^2)^{1-n} x
  ev.grad1_H.resize(n);
  const double c = (n - 2) * cn * std::pow(R, n - 2) * std::pow(R * R - ax * ax, 1.0 - n);
  for (int i = 0; i < n; ++i) ev.grad1_H[i] = c * xs[i];
  return ev;
}

BoundaryFrame reflected_point(const Point& x, const BallDomain& dom) {
  check_inside(x, dom, "reflected_point");
  const Point xs = sub(x, dom.center);
  const double ax = norm(xs);
  if (ax == 0.0)
    throw std::invalid_argument("reflected_point: x at the center, n_x not unique");
  BoundaryFrame fr;
  fr.d = dom.radius - ax;
  fr.n_x = scale(xs, 1.0 / ax);
  fr.x_star = add(x, scale(fr.n_x, 2.0 * fr.d));
  return fr;
}

Point kelvin_point(const Point& x, const BallDomain& dom) {
  const Point xs = sub(x, dom.center);
  const double xx = dot(xs, xs);
  if (xx == 0.0) throw std::invalid_argument("kelvin_point: x at the center");
  return add(dom.center, scale(xs, dom.radius * dom.radius / xx));
}

double poisson_kernel(const Point& x, const Point& w, const BallDomain& dom) {
  check_inside(x, dom, "poisson_kernel");
  const int n = dom.n;
  const double R = dom.radius;
  if (std::abs(dist(w, dom.center) - R) > 1e-9 * R)
    throw std::invalid_argument("poisson_kernel: w not on the sphere");
  const double ax = dist(x, dom.center);
  return (R * R - ax * ax) / (unit_sphere_area(n) * R * std::pow(dist(x, w), n));
}

BoundaryAsymptoticsReport verify_boundary_asymptotics(const BallDomain& dom,
                                                      const std::vector<double>& d_grid,
                                                      const Point& ray_dir) {
  const int n = dom.n;
  const double cn = newton_c(n);
  Point dir = ray_dir;
  if (dir.empty()) {
    dir.assign(n, 0.0);
    dir[0] = 1.0;
  }
  dir = scale(dir, 1.0 / norm(dir));

  BoundaryAsymptoticsReport rep;
  for (double d : d_grid) {
    const Point x = add(dom.center, scale(dir, dom.radius - d));
    RobinEval rv = robin(x, dom);
    BoundaryFrame fr = reflected_point(x, dom);
    BoundaryAsymptoticsRow row;
    row.d = d;
    row.ratio_H = rv.H_xx / (cn * std::pow(2.0 * d, 2.0 - n));
    const double dh = dot(fr.n_x, rv.grad1_H);
    row.ratio_dH = dh / ((n - 2) * cn * std::pow(2.0 * d, 1.0 - n));
    row.hn_margin_2d = dh / (0.5 * (n - 2) * cn * std::pow(2.0 * d, 1.0 - n));
    row.hn_margin_lit = dh / (0.5 * (n - 2) * cn * std::pow(d, 1.0 - n));
    rep.rows.push_back(row);
    rep.max_dev_H = std::max(rep.max_dev_H, std::abs(row.ratio_H - 1.0));
    rep.max_dev_dH = std::max(rep.max_dev_dH, std::abs(row.ratio_dH - 1.0));
    // O-term constants of eq. (h1-4)/(h1-5) style: |ratio-1| <= C d
    rep.fitted_O_H = std::max(rep.fitted_O_H, std::abs(row.ratio_H - 1.0) / d);
    rep.fitted_O_dH = std::max(rep.fitted_O_dH, std::abs(row.ratio_dH - 1.0) / d);
  }
  return rep;
}

double difference_bound_constant(const BallDomain& dom, int grid, double d_max) {
  const int n = dom.n;
  const double cn = newton_c(n);
  double sup = 0.0;
  // y near the boundary along e1, x spread over a grid of radii/angles
  for (int iy = 1; iy <= grid; ++iy) {
    const double dy = d_max * iy / grid;
    Point y(n, 0.0);
    y[0] = dom.radius - dy;
    y = add(dom.center, y);
    BoundaryFrame fr = reflected_point(y, dom);
    for (int ix = 1; ix <= grid; ++ix) {
      for (int ia = 0; ia <= grid; ++ia) {
        const double rr = 0.85 * dom.radius * ix / grid;
        const double th = M_PI * ia / grid;
        Point x(n, 0.0);
        x[0] = rr * std::cos(th);
        x[1] = rr * std::sin(th);
        x = add(dom.center, x);
        const double D =
            regular_part(x, y, dom) - cn * std::pow(dist(x, fr.x_star), 2.0 - n);
        const double bound = dy * std::pow(dist(x, fr.x_star), 2.0 - n);
        sup = std::max(sup, std::abs(D) / bound);
      }
    }
  }
  return sup;
}

}  // namespace greens_ball
}  // namespace lanelab
