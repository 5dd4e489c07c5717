#ifndef LANELAB_QUADRATURE_HPP
#define LANELAB_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "lanelab/geometry.hpp"

namespace lanelab {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;  // absolute error estimate
  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    err += o.err;
    return *this;
  }
};

// Gauss-Legendre nodes/weights on [-1,1]; cached per order.
const std::vector<double>& gl_nodes(int k);
const std::vector<double>& gl_weights(int k);

// Fixed-order panel integral of f on [a,b].
double gl_panel(const std::function<double(double)>& f, double a, double b, int k);

// Adaptive 1-D quadrature by panel bisection; error from halved-panel GL pairs.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

// Geometric panels from `a` toward `b`, first panel length h0, growth factor g.
// For integrands with a power feature at `a`. Error from per-panel k vs 2k GL.
QuadResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                            double h0, double growth = 2.0, int k = 10);

// ---------------------------------------------------------------------------
// Axisymmetric n-dim volume integrals reduced to the (rho, t) half-plane,
// rho = |z_perp| >= 0, t the coordinate along the symmetry axis.  The measure
// is |S^{n-2}| rho^{n-2} drho dt.  Integrands may be singular at on-axis
// centers (0, t_c); integration runs polar rays from each center with
// geometrically graded radial panels, the plane split along perpendicular
// bisector lines between consecutive centers.  The contribution of the
// unresolved inner shell s < cut is closed analytically from the known local
// order: (integrand x measure) ~ C s^{local_exp} as s -> 0.
// ---------------------------------------------------------------------------

struct SliceDomain {
  virtual ~SliceDomain() = default;
  // Largest s >= 0 with (rho,t) = (s sin(theta), t0 + s cos(theta)) inside.
  virtual double ray_exit(double t0, double theta) const = 0;
};

// Ball of radius R centered on the axis at t = tc: rho^2 + (t-tc)^2 < R^2.
struct BallSlice final : SliceDomain {
  double tc, R;
  BallSlice(double tc_, double R_) : tc(tc_), R(R_) {}
  double ray_exit(double t0, double theta) const override;
};

// Upper half plane t > 0, truncated at distance R_out from the ray origin.
// Tails beyond R_out are the caller's to close analytically.
struct HalfSpaceSlice final : SliceDomain {
  double R_out;
  explicit HalfSpaceSlice(double R_out_) : R_out(R_out_) {}
  double ray_exit(double t0, double theta) const override;
};

struct AxisCenter {
  double t;            // on-axis position of the singular/peaked point
  double inner_scale;  // feature length scale; radial panels start ~1e-8 of it
  double local_exp = 1.0;  // (f x measure) ~ s^{local_exp} near the center
};

struct AxisQuadOptions {
  int n_theta = 64;      // polar nodes per center (distributed over panels)
  int k_radial = 10;     // GL order per radial panel
  double growth = 1.9;   // geometric radial panel growth
  double cut_rel = 1e-8; // inner cut = cut_rel * inner_scale
  int refine_factor = 2; // theta refinement for the error estimate
};

// Integrate f(rho,t) * |S^{n-2}| rho^{n-2} over the slice domain.
// `centers` must be sorted by t, non-empty, with distinct t.
QuadResult integrate_axisym(int n, const SliceDomain& dom,
                            const std::vector<AxisCenter>& centers,
                            const std::function<double(double, double)>& f,
                            const AxisQuadOptions& opts = {});

// ---------------------------------------------------------------------------
// Plane-symmetric n-dim ball integrals reduced to 3-D.  For interior points
// x, y of a ball centered at the origin, integrands F(|w|, w.x, w.y) are
// invariant under rotations fixing span{x,y}: with w = (a, b, rho * omega),
// omega in S^{n-3}, the measure is |S^{n-3}| rho^{n-3} da db drho.  Rays run
// from each in-plane center over the hemisphere rho >= 0, parametrized polar
// about the inter-center direction so the bisector cut depends on the polar
// angle only; the polar range splits at the bisector/ball switch angle.
// ---------------------------------------------------------------------------

struct PlanarCenter {
  double a, b;
  double inner_scale;
  double local_exp = 1.0;
};

struct SpiderOptions {
  int n_psi = 24;        // polar nodes about the inter-center axis
  int n_chi = 24;        // azimuth nodes (hemisphere: chi in (0,pi))
  int k_radial = 8;
  double growth = 1.9;
  double cut_rel = 1e-8;
  int refine_factor = 2;
};

// Integrate f(a,b,rho) * |S^{n-3}| rho^{n-3} over {a^2+b^2+rho^2 < R^2, rho>0}.
// Requires n >= 4.
QuadResult integrate_planar_ball(int n, double R, const std::vector<PlanarCenter>& centers,
                                 const std::function<double(double, double, double)>& f,
                                 const SpiderOptions& opts = {});

// ---------------------------------------------------------------------------
// Sphere surface quadrature (pohozaev module).
// ---------------------------------------------------------------------------

struct SpherePoint {
  Point x;   // point on the sphere
  Point nu;  // outward unit normal
  double w;  // surface weight
};

// Full product rule on S^2 (n = 3): GL in cos(polar) x trapezoid in azimuth.
// For n > 3 a zonal rule about e1; exact for zonal integrands and the
// polynomial moments exercised here.
struct SurfaceQuadrature {
  int n = 3;
  Point center;
  double radius = 1.0;
  int order = 24;
  std::vector<SpherePoint> pts;

  SurfaceQuadrature(int n_, Point center_, double radius_, int order_ = 24);
  double integrate(const std::function<double(const Point&, const Point&)>& f) const;
};

}  // namespace lanelab

#endif
