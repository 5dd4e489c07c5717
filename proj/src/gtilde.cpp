#include "lanelab/gtilde.hpp"

#include <cmath>
#include <stdexcept>

#include "lanelab/greens.hpp"

namespace lanelab {
namespace gtilde_field {

namespace {

void require_range(int n, double p, const char* who) {
  if (p < 1.0 || p >= static_cast<double>(n) / (n - 2))
    throw std::invalid_argument(std::string(who) + ": need 1 <= p < n/(n-2)");
}

// 1 - (1-u)^p, stable for u of any size in (0,1).
double one_minus_pow(double u, double p) {
  if (u >= 1.0) return 1.0;
  return -std::expm1(p * std::log1p(-u));
}

// 1 - (1-u)^p - p u  (the second-order remainder), stable near u = 0.
double one_minus_pow_lin(double u, double p) {
  if (u >= 1.0) return 1.0 - p * u;
  if (std::abs(u) < 1e-4)
    return -0.5 * p * (p - 1.0) * u * u * (1.0 + (p - 2.0) * u / 3.0);
  return -std::expm1(p * std::log1p(-u)) - p * u;
}

// Scalar ball-Green helpers for a ball centered at the origin, radius R.
// Arguments are |x|^2, |w|^2, x.w, |x-w|.
struct BallKernel {
  int n;
  double R, cn;
  BallKernel(int n_, double R_) : n(n_), R(R_), cn(newton_c(n_)) {}

  double rho2(double xx, double ww, double xw) const {
    return xx * ww / (R * R) - 2.0 * xw + R * R;
  }
  double H(double xx, double ww, double xw) const {
    return cn * std::pow(rho2(xx, ww, xw), 0.5 * (2 - n));
  }
  double G(double xx, double ww, double xw, double r) const {
    return cn * std::pow(r, 2 - n) - H(xx, ww, xw);
  }
};

struct AxisFrame {
  Point dir;        // unit axis direction (through the center)
  double xt, yt;    // axis coordinates of x and y (center at 0)
  bool collinear;   // x, y, center collinear (within tolerance)
  Point e1, e2;     // plane basis when not collinear
  double xa, xb, ya, yb;
};

AxisFrame make_frame(const Point& x, const Point& y, const BallDomain& dom) {
  AxisFrame fr;
  const Point xs = sub(x, dom.center), ys = sub(y, dom.center);
  const double ax = norm(xs), ay = norm(ys);
  if (ax < 1e-13 * dom.radius || ay < 1e-13 * dom.radius) {
    fr.collinear = true;
    if (ax < 1e-13 * dom.radius && ay < 1e-13 * dom.radius) {
      fr.dir.assign(dom.n, 0.0);
      fr.dir[0] = 1.0;
    } else {
      fr.dir = (ax >= ay) ? scale(xs, 1.0 / ax) : scale(ys, 1.0 / ay);
    }
    fr.xt = dot(xs, fr.dir);
    fr.yt = dot(ys, fr.dir);
    return fr;
  }
  // sin of the angle at the center; fp noise in cross2 is ~eps (ax ay)^2
  const double cross2 =
      std::max(0.0, dot(xs, xs) * dot(ys, ys) - dot(xs, ys) * dot(xs, ys));
  const double sin_angle = std::sqrt(cross2) / (ax * ay);
  if (sin_angle < 1e-7) {
    fr.collinear = true;
    fr.dir = (ax >= ay) ? scale(xs, 1.0 / ax) : scale(ys, 1.0 / ay);
    fr.xt = dot(xs, fr.dir);
    fr.yt = dot(ys, fr.dir);
    return fr;
  }
  fr.collinear = false;
  fr.e1 = scale(xs, 1.0 / ax);
  Point y_perp = sub(ys, scale(fr.e1, dot(ys, fr.e1)));
  fr.e2 = scale(y_perp, 1.0 / norm(y_perp));
  fr.xa = ax;
  fr.xb = 0.0;
  fr.ya = dot(ys, fr.e1);
  fr.yb = dot(ys, fr.e2);
  return fr;
}

struct ScaledQuad {
  QuadResult q;
  int refinements = 0;
};

// Axisymmetric Gtilde-type integral: f(rho,t) = G(x,.) * G(.,y)^p, with the
// optional gradient component along the axis.
ScaledQuad gtilde_axis(const AxisFrame& fr, const BallDomain& dom, double p,
                       const SingularQuadConfig& cfg, int mode /*0 value, 1 grad_t*/) {
  const int n = dom.n;
  const BallKernel K(n, dom.radius);
  const double sep = std::abs(fr.xt - fr.yt);
  const double dx = dom.radius - std::abs(fr.xt), dy = dom.radius - std::abs(fr.yt);

  auto f = [&](double rho, double t) {
    const double ww = rho * rho + t * t;
    const double rx = std::sqrt(rho * rho + (t - fr.xt) * (t - fr.xt));
    const double ry = std::sqrt(rho * rho + (t - fr.yt) * (t - fr.yt));
    const double Gy = K.G(fr.yt * fr.yt, ww, fr.yt * t, ry);
    if (Gy <= 0.0) return 0.0;
    const double gp = std::pow(Gy, p);
    if (mode == 0) return K.G(fr.xt * fr.xt, ww, fr.xt * t, rx) * gp;
    // axis component of grad_x G(x,w)
    const double xx = fr.xt * fr.xt, xw = fr.xt * t;
    const double dG_sing = K.cn * (2 - n) * std::pow(rx, -n) * (fr.xt - t);
    const double rr2 = K.rho2(xx, ww, xw);
    const double dH = K.cn * (2 - n) * std::pow(rr2, -0.5 * n) * (fr.xt * ww / (K.R * K.R) - t);
    return (dG_sing - dH) * gp;
  };

  const double scale_x = std::min(std::max(sep, 1e-6), std::max(dx, 1e-9));
  const double scale_y = std::min(std::max(sep, 1e-6), std::max(dy, 1e-9));
  std::vector<AxisCenter> centers;
  const double exp_x = (mode == 0) ? 1.0 : 0.0;
  const double exp_y = n - 1 - (n - 2) * p;
  if (fr.xt <= fr.yt) {
    centers.push_back({fr.xt, 0.1 * scale_x, exp_x});
    if (sep > 0) centers.push_back({fr.yt, 0.1 * scale_y, exp_y});
  } else {
    centers.push_back({fr.yt, 0.1 * scale_y, exp_y});
    centers.push_back({fr.xt, 0.1 * scale_x, exp_x});
  }

  BallSlice slice(0.0, dom.radius);
  AxisQuadOptions opts;
  opts.n_theta = cfg.n_theta;
  ScaledQuad out;
  for (int lvl = 0;; ++lvl) {
    out.q = integrate_axisym(n, slice, centers, f, opts);
    out.refinements = lvl;
    if (out.q.err <= std::max(cfg.tol, 1e-6 * std::abs(out.q.value)) ||
        lvl >= cfg.max_refine)
      break;
    opts.n_theta *= 2;
    opts.k_radial += 4;
  }
  return out;
}

// General-pair Gtilde by the plane-reduced spider.
ScaledQuad gtilde_planar(const AxisFrame& fr, const BallDomain& dom, double p,
                         const SingularQuadConfig& cfg, int mode /*0 val,1 e1,2 e2*/) {
  const int n = dom.n;
  const BallKernel K(n, dom.radius);
  const double sep = std::hypot(fr.xa - fr.ya, fr.xb - fr.yb);
  const double dx = dom.radius - std::hypot(fr.xa, fr.xb);
  const double dy = dom.radius - std::hypot(fr.ya, fr.yb);

  auto f = [&](double a, double b, double rho) {
    const double ww = a * a + b * b + rho * rho;
    const double rx2 = (a - fr.xa) * (a - fr.xa) + (b - fr.xb) * (b - fr.xb) + rho * rho;
    const double ry2 = (a - fr.ya) * (a - fr.ya) + (b - fr.yb) * (b - fr.yb) + rho * rho;
    const double xw = fr.xa * a + fr.xb * b;
    const double yw = fr.ya * a + fr.yb * b;
    const double xx = fr.xa * fr.xa + fr.xb * fr.xb;
    const double yy = fr.ya * fr.ya + fr.yb * fr.yb;
    const double Gy = K.G(yy, ww, yw, std::sqrt(ry2));
    if (Gy <= 0.0) return 0.0;
    const double gp = std::pow(Gy, p);
    if (mode == 0) return K.G(xx, ww, xw, std::sqrt(rx2)) * gp;
    const double rx = std::sqrt(rx2);
    const double comp_x = (mode == 1) ? fr.xa : fr.xb;
    const double comp_w = (mode == 1) ? a : b;
    const double dG_sing = K.cn * (2 - n) * std::pow(rx, -n) * (comp_x - comp_w);
    const double rr2 = K.rho2(xx, ww, xw);
    const double dH =
        K.cn * (2 - n) * std::pow(rr2, -0.5 * n) * (comp_x * ww / (K.R * K.R) - comp_w);
    return (dG_sing - dH) * gp;
  };

  std::vector<PlanarCenter> centers;
  const double scale_x = std::min(std::max(sep, 1e-6), std::max(dx, 1e-9));
  const double scale_y = std::min(std::max(sep, 1e-6), std::max(dy, 1e-9));
  centers.push_back({fr.xa, fr.xb, 0.1 * scale_x, (mode == 0) ? 1.0 : 0.0});
  centers.push_back({fr.ya, fr.yb, 0.1 * scale_y, n - 1 - (n - 2) * p});

  SpiderOptions opts;
  opts.n_psi = cfg.n_psi;
  opts.n_chi = cfg.n_chi;
  ScaledQuad out;
  for (int lvl = 0;; ++lvl) {
    out.q = integrate_planar_ball(n, dom.radius, centers, f, opts);
    out.refinements = lvl;
    if (out.q.err <= std::max(cfg.tol, 1e-6 * std::abs(out.q.value)) ||
        lvl >= cfg.max_refine)
      break;
    opts.n_psi = opts.n_psi * 3 / 2;
    opts.n_chi = opts.n_chi * 3 / 2;
    opts.k_radial += 2;
  }
  return out;
}

}  // namespace

AlphaConstants alpha_constants(int n, double p) {
  require_range(n, p, "alpha_constants");
  AlphaConstants ac;
  ac.n = n;
  ac.p = p;
  const double cn = newton_c(n);
  const double f1 = (n - 2) * p - 2.0;        // > 0 for p >= 1, n >= 5
  const double f2 = n - (n - 2) * p;          // > 0 below the n/(n-2) threshold
  const double f3 = (n - 2) * p - n;          // = -f2
  const double f4 = (n - 2) * p - 2 * n + 2;  // < 0 in range
  if (std::abs(f1) < 1e-12 || std::abs(f2) < 1e-12 || std::abs(f4) < 1e-12)
    throw std::invalid_argument("alpha_constants: degenerate denominator");
  ac.alpha1 = std::pow(cn, p) / (f1 * f2);
  ac.alpha1_paper = std::pow(cn, p) / (f1 * f3);
  ac.alpha2 = -p * std::pow(cn, p - 1) / (f3 * f4);
  ac.alpha2_paper = p * std::pow(cn, p - 1) / (f3 * f4);
  ac.sign_discrepancy = (ac.alpha1 * ac.alpha1_paper < 0.0);
  return ac;
}

Branch branch_of(int n, double p) {
  return p < (n - 1.0) / (n - 2.0) ? Branch::low : Branch::high;
}

GtildeEval gtilde(const Point& x, const Point& y, const BallDomain& dom, double p,
                  const SingularQuadConfig& cfg) {
  require_range(dom.n, p, "gtilde");
  if (!dom.contains(x) || !dom.contains(y))
    throw std::invalid_argument("gtilde: points must lie inside the ball");
  if (dist(x, y) == 0.0) throw std::invalid_argument("gtilde: x == y");

  AxisFrame fr = make_frame(x, y, dom);
  GtildeEval ev;
  if (fr.collinear) {
    ScaledQuad sq = gtilde_axis(fr, dom, p, cfg, 0);
    ev.value = sq.q.value;
    ev.quad_error = sq.q.err;
    ev.converged = sq.q.err <= cfg.tol;
    if (cfg.want_grad) {
      ScaledQuad gq = gtilde_axis(fr, dom, p, cfg, 1);
      ev.grad_x = scale(fr.dir, gq.q.value);
      ev.quad_error += 0.0;
    }
  } else {
    ScaledQuad sq = gtilde_planar(fr, dom, p, cfg, 0);
    ev.value = sq.q.value;
    ev.quad_error = sq.q.err;
    ev.converged = sq.q.err <= cfg.tol;
    if (cfg.want_grad) {
      ScaledQuad g1 = gtilde_planar(fr, dom, p, cfg, 1);
      ScaledQuad g2 = gtilde_planar(fr, dom, p, cfg, 2);
      ev.grad_x = add(scale(fr.e1, g1.q.value), scale(fr.e2, g2.q.value));
    }
  }
  return ev;
}

HtildeEval htilde(const Point& x, const Point& y, const BallDomain& dom, double p,
                  const AlphaConstants& ac, const SingularQuadConfig& cfg) {
  require_range(dom.n, p, "htilde");
  const double r = dist(x, y);
  if (r == 0.0)
    throw std::invalid_argument("htilde: x == y; use htilde_diag (Green representation)");
  GtildeEval gt = gtilde(x, y, dom, p, cfg);
  HtildeEval ev;
  ev.branch = branch_of(dom.n, p);
  const double b1 = (dom.n - 2) * p - 2.0;
  ev.value = ac.alpha1 * std::pow(r, -b1) - gt.value;
  if (ev.branch == Branch::high) {
    const double b2 = (dom.n - 2) * p - dom.n;  // negative
    ev.value -= ac.alpha2 * greens_ball::regular_part(x, y, dom) * std::pow(r, -b2);
  }
  ev.quad_error = gt.quad_error;
  ev.converged = gt.converged;
  if (cfg.want_grad && ev.branch == Branch::low) {
    Point g = scale(sub(x, y), -b1 * ac.alpha1 * std::pow(r, -b1 - 2.0));
    ev.grad_x = sub(g, gt.grad_x);
  }
  return ev;
}

HtildeEval htilde_greenrep(const Point& x, const Point& y, const BallDomain& dom,
                           double p, const AlphaConstants& ac,
                           const SingularQuadConfig& cfg) {
  require_range(dom.n, p, "htilde_greenrep");
  const int n = dom.n;
  AxisFrame fr = make_frame(x, y, dom);
  if (!fr.collinear)
    throw std::invalid_argument("htilde_greenrep: x, y, center must be collinear");
  const BallKernel K(n, dom.radius);
  const double cn = K.cn;
  const double cnp = std::pow(cn, p);
  const Branch br = branch_of(n, p);
  const double m_coef = (n - 2) * p - 2.0 * n + 2.0;
  const double b1 = (n - 2) * p - 2.0;

  const double dx = dom.radius - std::abs(fr.xt);
  const double dy = dom.radius - std::abs(fr.yt);
  const double sep = std::abs(fr.xt - fr.yt);

  // sigma_y(z) = c_n^p |z-y|^{-(n-2)p} - G^p(z,y)  (+ high-branch terms),
  // written as sing * (1-(1-u)^p [- p u]) with u = H |z-y|^{n-2}/c_n so the
  // near-diagonal cancellation is computed stably.
  auto sigma = [&](double rho, double t) {
    const double ww = rho * rho + t * t;
    const double ry = std::sqrt(rho * rho + (t - fr.yt) * (t - fr.yt));
    const double yy = fr.yt * fr.yt, yw = fr.yt * t;
    const double Hzy = K.H(yy, ww, yw);
    const double sing = cnp * std::pow(ry, -(n - 2) * p);
    const double u = Hzy * std::pow(ry, n - 2) / cn;
    if (br == Branch::low) return sing * one_minus_pow(u, p);
    double s = sing * one_minus_pow_lin(u, p);
    // grad_z H(z,y) . (z-y): on-plane components (rho,t)
    const double rr2 = K.rho2(yy, ww, yw);
    const double c = cn * (2 - n) * std::pow(rr2, -0.5 * n);
    const double gr = c * (rho * yy / (K.R * K.R));
    const double gt_ = c * (t * yy / (K.R * K.R) - fr.yt);
    const double dotzy = gr * rho + gt_ * (t - fr.yt);
    s += (2.0 * p * std::pow(cn, p - 1) / m_coef) * dotzy *
         std::pow(ry, -(n - 2) * (p - 1));
    return s;
  };

  auto vol_f = [&](double rho, double t) {
    const double ww = rho * rho + t * t;
    const double rx = std::sqrt(rho * rho + (t - fr.xt) * (t - fr.xt));
    return K.G(fr.xt * fr.xt, ww, fr.xt * t, rx) * sigma(rho, t);
  };

  // centers: x (Green singularity), y (mild sigma singularity)
  std::vector<AxisCenter> centers;
  const double sx = 0.1 * std::max(sep > 0.0 ? std::min(dx, sep) : dx, 1e-9);
  const double sy = 0.1 * std::max(sep > 0.0 ? std::min(dy, sep) : dy, 1e-9);
  const double exp_x = (sep == 0.0) ? 1.0 - (n - 2) * (p - 1.0) : 1.0;
  const double exp_y = n - 1.0 - (n - 2) * (p - 1.0);
  if (sep == 0.0) {
    centers.push_back({fr.xt, sx, exp_x});
  } else if (fr.xt <= fr.yt) {
    centers.push_back({fr.xt, sx, exp_x});
    centers.push_back({fr.yt, sy, exp_y});
  } else {
    centers.push_back({fr.yt, sy, exp_y});
    centers.push_back({fr.xt, sx, exp_x});
  }

  BallSlice slice(0.0, dom.radius);
  AxisQuadOptions opts;
  opts.n_theta = cfg.n_theta;
  opts.growth = 1.6;  // keep panels below the boundary-peak width

  HtildeEval ev;
  ev.branch = br;
  QuadResult vol;
  for (int lvl = 0;; ++lvl) {
    vol = integrate_axisym(n, slice, centers, vol_f, opts);
    if (vol.err <= std::max(cfg.tol, 1e-6 * std::abs(vol.value)) || lvl >= cfg.max_refine)
      break;
    opts.n_theta *= 2;
    opts.k_radial += 4;
  }

  // boundary term: int_{dOmega} P(x,w) bdata(w,y) dS, polar angle from the
  // positive axis; P is peaked at the boundary point nearest to x.
  const double R = dom.radius;
  const double area_sm1 = unit_sphere_area(n - 1);
  const double bcoef = (br == Branch::low) ? ac.alpha1 : (ac.alpha1 - cn * ac.alpha2);
  auto bnd_f = [&](double th) {
    const double ct = std::cos(th), st = std::sin(th);
    const double wx2 = R * R + fr.xt * fr.xt - 2.0 * R * fr.xt * ct;
    const double wy2 = R * R + fr.yt * fr.yt - 2.0 * R * fr.yt * ct;
    const double P = (R * R - fr.xt * fr.xt) /
                     (unit_sphere_area(n) * R * std::pow(std::sqrt(wx2), n));
    const double bdata = bcoef * std::pow(std::sqrt(wy2), -b1);
    return P * bdata * area_sm1 * std::pow(R * st, n - 2) * R;
  };
  // polar grading near the axis ends where P can peak
  const double peak = std::max(std::min(dx, dy) / R, 1e-6);
  QuadResult bnd;
  if (fr.xt >= 0.0) {
    bnd = integrate_graded(bnd_f, 0.0, M_PI / 2, 0.05 * peak, 1.7, 12);
    QuadResult rest = integrate_graded([&](double u) { return bnd_f(M_PI - u); }, 0.0,
                                       M_PI / 2, 0.05, 1.7, 12);
    bnd += rest;
  } else {
    bnd = integrate_graded([&](double u) { return bnd_f(M_PI - u); }, 0.0, M_PI / 2,
                           0.05 * peak, 1.7, 12);
    QuadResult rest = integrate_graded(bnd_f, 0.0, M_PI / 2, 0.05, 1.7, 12);
    bnd += rest;
  }

  ev.value = vol.value + bnd.value;
  ev.quad_error = vol.err + bnd.err;
  ev.converged = ev.quad_error <= std::max(10.0 * cfg.tol, 1e-5 * std::abs(ev.value));
  return ev;
}

GrowthScan boundary_growth_scan(const BallDomain& dom, double p,
                                const std::vector<double>& d_grid,
                                const SingularQuadConfig& cfg) {
  require_range(dom.n, p, "boundary_growth_scan");
  AlphaConstants ac = alpha_constants(dom.n, p);
  Point dir(dom.n, 0.0);
  dir[0] = 1.0;

  GrowthScan scan;
  for (double d : d_grid) {
    GrowthRow row;
    row.d = d;
    const double h = 0.05 * d;
    auto diag_at = [&](double dd) {
      Point x = add(dom.center, scale(dir, dom.radius - dd));
      return htilde_diag(x, dom, p, ac, cfg).value;
    };
    row.phi = diag_at(d);
    // n_x points outward: t along n_x decreases d
    row.dphi_half = 0.5 * (diag_at(d - h) - diag_at(d + h)) / (2.0 * h);
    // direct two-point route, y frozen at distance d
    Point xc = add(dom.center, scale(dir, dom.radius - d));
    Point xp = add(dom.center, scale(dir, dom.radius - d + h));
    Point xm = add(dom.center, scale(dir, dom.radius - d - h));
    const double vp = htilde_greenrep(xp, xc, dom, p, ac, cfg).value;
    const double vm = htilde_greenrep(xm, xc, dom, p, ac, cfg).value;
    row.dphi_direct = (vp - vm) / (2.0 * h);
    scan.rows.push_back(row);
  }

  // log-log LSQ slope of dphi_half vs d
  auto fit_slope = [&](bool direct) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : scan.rows) {
      const double v = direct ? r.dphi_direct : r.dphi_half;
      if (v <= 0.0) continue;
      const double lx = std::log(r.d), ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  scan.slope = fit_slope(false);
  scan.slope_direct = fit_slope(true);
  scan.positive_sign = true;
  for (const auto& r : scan.rows)
    if (r.dphi_half <= 0.0) scan.positive_sign = false;
  // residual about the fitted line
  double sx = 0, sy = 0;
  int m = 0;
  for (const auto& r : scan.rows)
    if (r.dphi_half > 0) {
      sx += std::log(r.d);
      sy += std::log(r.dphi_half);
      ++m;
    }
  if (m >= 2) {
    const double xb = sx / m, yb = sy / m;
    double rss = 0;
    for (const auto& r : scan.rows)
      if (r.dphi_half > 0)
        rss += std::pow(std::log(r.dphi_half) - yb - scan.slope * (std::log(r.d) - xb), 2);
    scan.slope_residual = std::sqrt(rss / m);
  }
  return scan;
}

}  // namespace gtilde_field
}  // namespace lanelab
