#ifndef LANELAB_GREENS_HPP
#define LANELAB_GREENS_HPP

#include <vector>

#include "lanelab/geometry.hpp"

namespace lanelab {
namespace greens_ball {

struct GreensEval {
  double G = 0.0;
  Point grad_x_G;
  double H = 0.0;
  Point grad_x_H;
  double c_n = 0.0;
};

struct BoundaryFrame {
  double d = 0.0;   // dist(x, boundary)
  Point n_x;        // outward unit direction, x + d n_x on the boundary
  Point x_star;     // x + 2 d n_x
};

// Dirichlet Green's function of -Laplace on the ball, by the image method.
// G(x,y) = c_n |x-y|^{2-n} - H(x,y), H(x,y) = c_n rho(x,y)^{2-n} with
// rho^2 = |x'|^2 |y'|^2 / R^2 - 2 <x',y'> + R^2 (primes: center-shifted).
GreensEval greens(const Point& x, const Point& y, const BallDomain& dom);

// Regular part alone (smooth also at x = y).
double regular_part(const Point& x, const Point& y, const BallDomain& dom);
Point grad_x_regular_part(const Point& x, const Point& y, const BallDomain& dom);

// Robin function H(x,x) and the one-slot gradient grad_x H(x,y)|_{y=x}.
struct RobinEval {
  double H_xx = 0.0;
  Point grad1_H;
};
RobinEval robin(const Point& x, const BallDomain& dom);

// Boundary frame with the reflected point x* = x + 2 d(x) n_x.
BoundaryFrame reflected_point(const Point& x, const BallDomain& dom);

// Kelvin image R^2 (x - c)/|x - c|^2 + c (distinct from x*).
Point kelvin_point(const Point& x, const BallDomain& dom);

// Poisson kernel K(x,w) = (R^2 - |x'|^2) / (|S^{n-1}| R |x-w|^n), w on the sphere.
double poisson_kernel(const Point& x, const Point& w, const BallDomain& dom);

// Boundary-approach diagnostics: for x on a fixed ray at distance d, the
// ratios of H(x,x) and n_x . grad1 H(x,x) to their reflected-point asymptotes.
struct BoundaryAsymptoticsRow {
  double d = 0.0;
  double ratio_H = 0.0;    // H(x,x) / (c_n |x-x*|^{2-n})
  double ratio_dH = 0.0;   // n_x.grad1H / ((n-2) c_n (2d)^{1-n})
  double hn_margin_2d = 0.0;  // n_x.grad1H / (((n-2)c_n/2) (2d)^{-(n-1)})
  double hn_margin_lit = 0.0; // n_x.grad1H / (((n-2)c_n/2) d^{-(n-1)})
};

struct BoundaryAsymptoticsReport {
  std::vector<BoundaryAsymptoticsRow> rows;
  double max_dev_H = 0.0, max_dev_dH = 0.0;   // max |ratio-1| over rows
  double fitted_O_H = 0.0, fitted_O_dH = 0.0; // fitted constants of the O(d) terms
};

BoundaryAsymptoticsReport verify_boundary_asymptotics(const BallDomain& dom,
                                                      const std::vector<double>& d_grid,
                                                      const Point& ray_dir = {});

// |D(x,y)| = |H(x,y) - c_n |x-y*|^{2-n}| <= C d(y)/|x-y*|^{n-2}; returns the
// sup of the ratio over a pair grid (the fitted C).
double difference_bound_constant(const BallDomain& dom, int grid = 6, double d_max = 0.2);

}  // namespace greens_ball
}  // namespace lanelab

#endif
