#include "lanelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace lanelab {

namespace {

struct GLRule {
  std::vector<double> x, w;
};

// Newton iteration on Legendre polynomials.
GLRule make_gl(int k) {
  GLRule r;
  r.x.resize(k);
  r.w.resize(k);
  for (int i = 0; i < k; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (k + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = k * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= k; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = k * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GLRule& gl_rule(int k) {
  static std::map<int, GLRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, make_gl(k)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int k) { return gl_rule(k).x; }
const std::vector<double>& gl_weights(int k) { return gl_rule(k).w; }

double gl_panel(const std::function<double(double)>& f, double a, double b, int k) {
  const GLRule& r = gl_rule(k);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

namespace {

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           int depth, int max_depth, QuadResult& out) {
  double coarse = gl_panel(f, a, b, 8);
  double m = 0.5 * (a + b);
  double fine = gl_panel(f, a, m, 8) + gl_panel(f, m, b, 8);
  double err = std::abs(fine - coarse);
  if (err < tol || depth >= max_depth) {
    out.value += fine;
    out.err += err;
    return;
  }
  adapt(f, a, m, 0.5 * tol, depth + 1, max_depth, out);
  adapt(f, m, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  adapt(f, a, b, abs_tol, 0, max_depth, out);
  return out;
}

QuadResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                            double h0, double growth, int k) {
  QuadResult out;
  if (b <= a) return out;
  double lo = a;
  double h = std::min(h0, b - a);
  while (lo < b) {
    double hi = std::min(lo + h, b);
    double coarse = gl_panel(f, lo, hi, k);
    double fine = gl_panel(f, lo, hi, 2 * k);
    out.value += fine;
    out.err += std::abs(fine - coarse);
    lo = hi;
    h *= growth;
  }
  return out;
}

// --------------------------------------------------------------------------
// Slice domains
// --------------------------------------------------------------------------

double BallSlice::ray_exit(double t0, double theta) const {
  // s^2 + 2 s (t0-tc) cos(theta) + (t0-tc)^2 - R^2 = 0
  const double d = t0 - tc;
  const double bq = d * std::cos(theta);
  const double cq = d * d - R * R;
  const double disc = bq * bq - cq;
  if (disc <= 0.0) return 0.0;
  return std::max(-bq + std::sqrt(disc), 0.0);
}

double HalfSpaceSlice::ray_exit(double t0, double theta) const {
  const double c = std::cos(theta);
  const double s_plane = (c < 0.0) ? (-t0 / c) : std::numeric_limits<double>::infinity();
  return std::min(s_plane, R_out);
}

// --------------------------------------------------------------------------
// Axisymmetric engine
// --------------------------------------------------------------------------

namespace {

// Radial 1-D integral along one ray: geometric panels from the cut upward, and
// analytic closure of the shell below the cut from the known local order
// (integrand ~ C s^{local_exp} as s -> 0).  Panels are singularity-free, so
// the per-panel GL pair is a sound error estimate.
QuadResult ray_integral(const std::function<double(double)>& g, double smax,
                        double inner, double cut_rel, double growth, int k,
                        double local_exp) {
  QuadResult out;
  const double cut_scale = (local_exp >= 0.5) ? 1e-4 : cut_rel;
  const double cut = std::min(inner * cut_scale, 0.5 * smax);
  out = integrate_graded(g, cut, smax, cut, growth, k);
  const double sp = 0.5 * cut;
  if (sp > 0.0) {
    const double coef = g(sp) / std::pow(sp, local_exp);
    const double shell = coef * std::pow(cut, local_exp + 1.0) / (local_exp + 1.0);
    out.value += shell;
    out.err += 0.3 * std::abs(shell);
  }
  return out;
}

// Detect breakpoints of theta -> min over active constraints, by argmin switch.
std::vector<double> find_breakpoints(const std::function<int(double)>& argmin_of,
                                     double lo, double hi, int scan) {
  std::vector<double> brk;
  int prev = argmin_of(lo + 1e-12 * (hi - lo));
  for (int i = 1; i <= scan; ++i) {
    double th = lo + (hi - lo) * i / scan;
    int cur = argmin_of(th);
    if (cur != prev) {
      double a = lo + (hi - lo) * (i - 1) / scan, b = th;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        if (argmin_of(m) == prev)
          a = m;
        else
          b = m;
      }
      brk.push_back(0.5 * (a + b));
      prev = cur;
    }
  }
  return brk;
}

double axisym_pass(int n, const SliceDomain& dom, const std::vector<AxisCenter>& centers,
                   const std::function<double(double, double)>& f,
                   const AxisQuadOptions& opts, int n_theta, double* err_accum) {
  const double area = unit_sphere_area(n - 1);  // |S^{n-2}|
  double total = 0.0;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const AxisCenter& c = centers[ci];

    auto constraints = [&](double theta, double* vals) {
      // 0: domain exit, 1: bisector to next, 2: bisector to prev
      const double cth = std::cos(theta);
      vals[0] = dom.ray_exit(c.t, theta);
      vals[1] = std::numeric_limits<double>::infinity();
      vals[2] = std::numeric_limits<double>::infinity();
      if (ci + 1 < centers.size() && cth > 0.0)
        vals[1] = 0.5 * (centers[ci + 1].t - c.t) / cth;
      if (ci > 0 && cth < 0.0) vals[2] = 0.5 * (centers[ci - 1].t - c.t) / cth;
    };
    auto smax_of = [&](double theta) {
      double v[3];
      constraints(theta, v);
      return std::min({v[0], v[1], v[2]});
    };
    auto argmin_of = [&](double theta) {
      double v[3];
      constraints(theta, v);
      int a = 0;
      if (v[1] < v[a]) a = 1;
      if (v[2] < v[a]) a = 2;
      return a;
    };

    std::vector<double> brk = find_breakpoints(argmin_of, 0.0, M_PI, 512);
    brk.insert(brk.begin(), 0.0);
    brk.push_back(M_PI);

    for (std::size_t bi = 0; bi + 1 < brk.size(); ++bi) {
      const double th0 = brk[bi], th1 = brk[bi + 1];
      const int k_th = std::max(12, static_cast<int>(n_theta * (th1 - th0) / M_PI));
      const auto& tx = gl_nodes(k_th);
      const auto& tw = gl_weights(k_th);
      for (int it = 0; it < k_th; ++it) {
        const double theta = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * tx[it];
        const double wth = 0.5 * (th1 - th0) * tw[it];
        const double sth = std::sin(theta), cth = std::cos(theta);
        const double smax = smax_of(theta);
        if (!(smax > 0.0) || !std::isfinite(smax)) continue;
        auto radial = [&](double s) {
          const double rho = s * sth;
          return f(rho, c.t + s * cth) * std::pow(rho, n - 2) * s;
        };
        // (f x measure) ~ s^{local_exp} x sin^{n-2}(theta) near s = 0
        QuadResult rq = ray_integral(radial, smax, c.inner_scale, opts.cut_rel,
                                     opts.growth, opts.k_radial, c.local_exp);
        total += area * wth * rq.value;
        if (err_accum) *err_accum += area * wth * rq.err;
      }
    }
  }
  return total;
}

}  // namespace

QuadResult integrate_axisym(int n, const SliceDomain& dom,
                            const std::vector<AxisCenter>& centers,
                            const std::function<double(double, double)>& f,
                            const AxisQuadOptions& opts) {
  double radial_err = 0.0;
  const double coarse = axisym_pass(n, dom, centers, f, opts, opts.n_theta, nullptr);
  const double fine =
      axisym_pass(n, dom, centers, f, opts, opts.n_theta * opts.refine_factor, &radial_err);
  QuadResult out;
  out.value = fine;
  out.err = std::abs(fine - coarse) + radial_err;
  return out;
}

// --------------------------------------------------------------------------
// Planar 3-D spider
// --------------------------------------------------------------------------

namespace {

double spider_pass(int n, double R, const std::vector<PlanarCenter>& centers,
                   const std::function<double(double, double, double)>& f,
                   const SpiderOptions& opts, int n_psi, int n_chi, double* err_accum) {
  const double area = unit_sphere_area(n - 2);  // |S^{n-3}|
  double total = 0.0;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const PlanarCenter& c = centers[ci];
    // polar axis toward the other center (or +a if single)
    double da = 1.0, db = 0.0, sep = std::numeric_limits<double>::infinity();
    if (centers.size() == 2) {
      const PlanarCenter& o = centers[1 - ci];
      da = o.a - c.a;
      db = o.b - c.b;
      sep = std::hypot(da, db);
      da /= sep;
      db /= sep;
    }
    // in-plane perpendicular
    const double ma = -db, mb = da;

    const auto& cx = gl_nodes(n_chi);
    const auto& cw = gl_weights(n_chi);
    for (int ic = 0; ic < n_chi; ++ic) {
      const double chi = 0.5 * M_PI * (cx[ic] + 1.0);  // (0,pi): rho-component >= 0
      const double wchi = 0.5 * M_PI * cw[ic];
      const double cchi = std::cos(chi), schi = std::sin(chi);

      // direction u(psi) = cos(psi) d + sin(psi)(cos(chi) m + sin(chi) rho_hat)
      auto dir = [&](double psi, double* ua, double* ub, double* ur) {
        const double cp = std::cos(psi), sp = std::sin(psi);
        *ua = cp * da + sp * cchi * ma;
        *ub = cp * db + sp * cchi * mb;
        *ur = sp * schi;
      };
      auto ball_exit = [&](double psi) {
        double ua, ub, ur;
        dir(psi, &ua, &ub, &ur);
        const double bq = c.a * ua + c.b * ub;
        const double cq = c.a * c.a + c.b * c.b - R * R;
        const double disc = bq * bq - cq;
        if (disc <= 0.0) return 0.0;
        return std::max(-bq + std::sqrt(disc), 0.0);
      };
      auto bis_cut = [&](double psi) {
        if (centers.size() < 2) return std::numeric_limits<double>::infinity();
        const double cp = std::cos(psi);
        return (cp > 0.0) ? 0.5 * sep / cp : std::numeric_limits<double>::infinity();
      };
      auto argmin_of = [&](double psi) { return ball_exit(psi) <= bis_cut(psi) ? 0 : 1; };

      std::vector<double> brk = find_breakpoints(argmin_of, 0.0, M_PI, 128);
      brk.insert(brk.begin(), 0.0);
      brk.push_back(M_PI);

      for (std::size_t bi = 0; bi + 1 < brk.size(); ++bi) {
        const double p0 = brk[bi], p1 = brk[bi + 1];
        const int k_psi = std::max(10, static_cast<int>(n_psi * (p1 - p0) / M_PI));
        const auto& px = gl_nodes(k_psi);
        const auto& pw = gl_weights(k_psi);
        for (int ip = 0; ip < k_psi; ++ip) {
          const double psi = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * px[ip];
          const double wpsi = 0.5 * (p1 - p0) * pw[ip] * std::sin(psi);
          const double smax = std::min(ball_exit(psi), bis_cut(psi));
          if (!(smax > 0.0) || !std::isfinite(smax)) continue;
          double ua, ub, ur;
          dir(psi, &ua, &ub, &ur);
          auto radial = [&](double s) {
            const double a = c.a + s * ua, b = c.b + s * ub, rho = s * ur;
            return f(a, b, rho) * std::pow(rho, n - 3) * s * s;
          };
          QuadResult rq = ray_integral(radial, smax, c.inner_scale, opts.cut_rel,
                                       opts.growth, opts.k_radial, c.local_exp);
          total += area * wchi * wpsi * rq.value;
          if (err_accum) *err_accum += area * wchi * wpsi * rq.err;
        }
      }
    }
  }
  return total;
}

}  // namespace

QuadResult integrate_planar_ball(int n, double R, const std::vector<PlanarCenter>& centers,
                                 const std::function<double(double, double, double)>& f,
                                 const SpiderOptions& opts) {
  double radial_err = 0.0;
  const double coarse = spider_pass(n, R, centers, f, opts, opts.n_psi, opts.n_chi, nullptr);
  const double fine = spider_pass(n, R, centers, f, opts, opts.n_psi * opts.refine_factor,
                                  opts.n_chi * opts.refine_factor, &radial_err);
  QuadResult out;
  out.value = fine;
  out.err = std::abs(fine - coarse) + radial_err;
  return out;
}

// --------------------------------------------------------------------------
// Sphere surface quadrature
// --------------------------------------------------------------------------

SurfaceQuadrature::SurfaceQuadrature(int n_, Point center_, double radius_, int order_)
    : n(n_), center(std::move(center_)), radius(radius_), order(order_) {
  const auto& mx = gl_nodes(order);
  const auto& mw = gl_weights(order);
  if (n == 3) {
    const int naz = 2 * order;
    const double rr = radius * radius;
    for (int i = 0; i < order; ++i) {
      const double mu = mx[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int j = 0; j < naz; ++j) {
        const double phi = 2.0 * M_PI * j / naz;
        Point nu = {s * std::cos(phi), s * std::sin(phi), mu};
        SpherePoint p;
        p.nu = nu;
        p.x = add(center, scale(nu, radius));
        p.w = mw[i] * (2.0 * M_PI / naz) * rr;
        pts.push_back(std::move(p));
      }
    }
  } else {
    const double area = unit_sphere_area(n - 1);
    for (int i = 0; i < order; ++i) {
      const double mu = mx[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      Point nu(n, 0.0);
      nu[0] = mu;
      nu[1] = s;
      SpherePoint p;
      p.nu = nu;
      p.x = add(center, scale(nu, radius));
      p.w = mw[i] * area * std::pow(1.0 - mu * mu, 0.5 * (n - 3)) * std::pow(radius, n - 1);
      pts.push_back(std::move(p));
    }
  }
}

double SurfaceQuadrature::integrate(
    const std::function<double(const Point&, const Point&)>& f) const {
  double s = 0.0;
  for (const auto& p : pts) s += p.w * f(p.x, p.nu);
  return s;
}

}  // namespace lanelab
