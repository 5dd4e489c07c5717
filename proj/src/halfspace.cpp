#include "lanelab/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanelab {
namespace halfspace {

namespace {

void require_n(int n, const char* who) {
  if (n < 5) throw std::invalid_argument(std::string(who) + ": n >= 5 required");
}

void require_branch(int n, double p, const char* who) {
  if (p < 0.0 || p >= static_cast<double>(n) / (n - 2))
    throw std::invalid_argument(std::string(who) + ": p outside [1, n/(n-2))");
}

double one_minus_pow(double u, double p) {
  if (u >= 1.0) return 1.0;
  return -std::expm1(p * std::log1p(-u));
}

double one_minus_pow_lin(double u, double p) {
  if (u >= 1.0) return 1.0 - p * u;
  if (std::abs(u) < 1e-4)
    return -0.5 * p * (p - 1.0) * u * u * (1.0 + (p - 2.0) * u / 3.0);
  return -std::expm1(p * std::log1p(-u)) - p * u;
}

// Branch bracket B(z) of the sign condition, z = (rho, t) about the axis:
//   low:  (b - c)^p - b^p
//   high: (b - c)^p - b^p + p c b^{p-1}
//         + (2p(n-2)/m) [(z+e_n).(z-e_n)] |z+e_n|^{-n} b^{p-1},
// with b = |z-e_n|^{2-n}, c = |z+e_n|^{2-n}, m = (n-2)p - 2n + 2.
double bracket(int n, double p, Branch br, double rho, double t) {
  if (p == 0.0) return 0.0;  // sanity mode: bracket vanishes identically
  const double rm2 = rho * rho + (t - 1.0) * (t - 1.0);
  const double rp2 = rho * rho + (t + 1.0) * (t + 1.0);
  const double rm = std::sqrt(rm2), rp = std::sqrt(rp2);
  const double b = std::pow(rm, 2 - n);
  const double u = std::pow(rm / rp, n - 2);  // c/b in (0,1)
  if (br == Branch::low) return -std::pow(b, p) * one_minus_pow(u, p);
  const double m = (n - 2) * p - 2.0 * n + 2.0;
  double s = -std::pow(b, p) * one_minus_pow_lin(u, p);
  const double zdot = rho * rho + t * t - 1.0;  // (z+e_n).(z-e_n)
  s += (2.0 * p * (n - 2) / m) * zdot * std::pow(rp, -n) * std::pow(b, p - 1.0);
  return s;
}

// K(z) = (1-z_n)/|z-e_n|^n - (1+z_n)/|z+e_n|^n
double kernel_K(int n, double rho, double t) {
  const double rm2 = rho * rho + (t - 1.0) * (t - 1.0);
  const double rp2 = rho * rho + (t + 1.0) * (t + 1.0);
  return (1.0 - t) * std::pow(rm2, -0.5 * n) - (1.0 + t) * std::pow(rp2, -0.5 * n);
}

// hat_piece(beta) = |S^{n-2}| int_0^inf r^{n-2} (1+r^2)^{-beta/2} dr,
// via r = tan(theta): finite interval, no truncation.
double hat_piece(int n, double beta) {
  auto f = [&](double th) {
    const double r = std::tan(th);
    const double sec2 = 1.0 + r * r;
    return std::pow(r, n - 2) * std::pow(sec2, -0.5 * beta) * sec2;
  };
  double v = gl_panel(f, 0.0, 0.5 * M_PI, 96);
  return unit_sphere_area(n - 1) * v;
}

struct TwoPiece {
  double p1 = 0.0, p2 = 0.0;
};

TwoPiece rhs_pieces(int n, double p) {
  TwoPiece tp;
  tp.p1 = 2.0 * hat_piece(n, (n - 2.0) * (p + 1.0));
  tp.p2 = 2.0 * n * hat_piece(n, (n - 2.0) * p + n);
  return tp;
}

double alpha_eff_of(const AlphaConstants& ac, Branch br) {
  return (br == Branch::low) ? ac.alpha1 : ac.alpha1 - newton_c(ac.n) * ac.alpha2;
}

// Half-space volume quadrature; the truncation tail is closed from the signed
// angular shell at R_trunc and the known decay power, with half its magnitude
// charged to the error.
Integral halfspace_volume(int n, const std::vector<AxisCenter>& centers,
                          const std::function<double(double, double)>& f,
                          const CriterionConfig& cfg, double tail_decay_power) {
  HalfSpaceSlice dom(cfg.R_trunc);
  AxisQuadOptions opts;
  opts.n_theta = cfg.n_theta;
  QuadResult q = integrate_axisym(n, dom, centers, f, opts);
  const double R = cfg.R_trunc;
  double shell = 0.0, shell_abs = 0.0;
  const int K = 48;
  for (int i = 0; i < K; ++i) {
    const double th = M_PI * (i + 0.5) / K;  // angle about e_n
    const double rho = R * std::sin(th), t = 1.0 + R * std::cos(th);
    if (t <= 0.0) continue;
    const double v = f(rho, t) * std::pow(rho, n - 2) * R * (M_PI / K) *
                     unit_sphere_area(n - 1);
    shell += v;
    shell_abs += std::abs(v);
  }
  const double gamma = tail_decay_power;
  const double fac = (gamma > 1.0) ? R / (gamma - 1.0) : R;
  Integral out;
  out.value = q.value + shell * fac;
  out.err = q.err + 0.5 * shell_abs * fac;
  return out;
}

}  // namespace

Integral lhs_integral(int n, double p, const CriterionConfig& cfg) {
  require_n(n, "lhs_integral");
  require_branch(n, p, "lhs_integral");
  if (p == 0.0) return {};
  const Branch br = gtilde_field::branch_of(n, p);
  auto f = [&](double rho, double t) {
    return kernel_K(n, rho, t) * bracket(n, p, br, rho, t);
  };
  std::vector<AxisCenter> centers = {
      {1.0, std::max(cfg.shell_eps, 1e-6), -(n - 2.0) * (p - 1.0)}};
  // far field: K ~ z_n s^{-n}, bracket ~ s^{-(n-2)p}; the angular shell decays
  // like s^{-(n-2)p}
  return halfspace_volume(n, centers, f, cfg, (n - 2.0) * p);
}

RhsEval rhs_integral(int n, double p, const AlphaConstants& ac,
                     const CriterionConfig& cfg) {
  require_n(n, "rhs_integral");
  require_branch(n, p, "rhs_integral");
  if ((n - 2.0) * (p + 1.0) <= n - 1.0)
    throw std::invalid_argument("rhs_integral: divergent boundary piece, exponent " +
                                std::to_string((n - 2.0) * (p + 1.0)));
  (void)cfg;
  const Branch br = gtilde_field::branch_of(n, p);
  TwoPiece tp = rhs_pieces(n, p);
  RhsEval ev;
  ev.piece_boundary = tp.p1;
  ev.piece_second = tp.p2;
  ev.alpha_eff = alpha_eff_of(ac, br);
  ev.value = (n - 2.0) * ev.alpha_eff * (tp.p1 - tp.p2);
  ev.err = 1e-12 * (std::abs(tp.p1) + std::abs(tp.p2)) * std::abs(ev.alpha_eff) * (n - 2);
  return ev;
}

CriterionReport criterion(int n, double p, const CriterionConfig& cfg) {
  require_n(n, "criterion");
  if (p < 1.0 || p >= static_cast<double>(n) / (n - 2))
    throw std::invalid_argument("criterion: p outside [1, n/(n-2))");
  AlphaConstants ac = gtilde_field::alpha_constants(n, p);
  const double cnp = std::pow(newton_c(n), p);

  CriterionReport rep;
  rep.n = n;
  rep.p = p;
  Integral F = lhs_integral(n, p, cfg);
  RhsEval R = rhs_integral(n, p, ac, cfg);
  rep.F = F.value;
  // diff = F - Gv equals d/dx_n W_0(e_n) up to the factor (n-2) c_n^{p+1} > 0
  rep.Gv = -R.value / ((n - 2.0) * cnp);
  rep.diff = rep.F - rep.Gv;
  rep.err = F.err + R.err / ((n - 2.0) * cnp);
  rep.verdict =
      (std::abs(rep.diff) > 3.0 * rep.err) ? Verdict::holds : Verdict::inconclusive;
  rep.dW0 = (n - 2.0) * newton_c(n) * cnp * rep.diff;
  return rep;
}

W0Eval w0_derivative(int n, double p, const CriterionConfig& cfg) {
  require_n(n, "w0_derivative");
  require_branch(n, p, "w0_derivative");
  AlphaConstants ac = gtilde_field::alpha_constants(n, p);
  const Branch br = gtilde_field::branch_of(n, p);
  const double cn = newton_c(n);
  const double cnp = std::pow(cn, p);

  // dI1: d/dx_n at e_n of the Green potential of sigma = -c_n^p B;
  // d/dx_n G0(e_n, z) = -(n-2) c_n K(z)
  auto f = [&](double rho, double t) {
    const double sig = -cnp * bracket(n, p, br, rho, t);
    return -(n - 2.0) * cn * kernel_K(n, rho, t) * sig;
  };
  std::vector<AxisCenter> centers = {
      {1.0, std::max(cfg.shell_eps, 1e-6), -(n - 2.0) * (p - 1.0)}};
  Integral i1 = halfspace_volume(n, centers, f, cfg, (n - 2.0) * p);

  W0Eval ev;
  ev.dI1 = i1.value;
  TwoPiece tp = rhs_pieces(n, p);
  ev.dI2 = (n - 2.0) * cn * alpha_eff_of(ac, br) * (tp.p1 - tp.p2);
  ev.total = ev.dI1 + ev.dI2;
  ev.err = i1.err + 1e-12 * std::abs(ev.dI2);
  return ev;
}

Integral htilde0_axis(double t_x, double t_y, int n, double p,
                      const CriterionConfig& cfg) {
  require_n(n, "htilde0_axis");
  require_branch(n, p, "htilde0_axis");
  if (t_x <= 0.0 || t_y <= 0.0)
    throw std::invalid_argument("htilde0_axis: points must lie in the upper half space");
  AlphaConstants ac = gtilde_field::alpha_constants(n, p);
  const Branch br = gtilde_field::branch_of(n, p);
  const double cn = newton_c(n);
  const double cnp = std::pow(cn, p);
  const double m = (n - 2.0) * p - 2.0 * n + 2.0;

  // sigma_y(z) = c_n^p |z-y|^{-(n-2)p} - G0^p(z,y) (+ high-branch terms) with
  // H0(z,y) = c_n |z-y*|^{2-n}
  auto sigma = [&](double rho, double t) {
    const double rm = std::sqrt(rho * rho + (t - t_y) * (t - t_y));
    const double rp = std::sqrt(rho * rho + (t + t_y) * (t + t_y));
    const double sing = cnp * std::pow(rm, -(n - 2.0) * p);
    const double u = std::pow(rm / rp, n - 2);
    if (br == Branch::low) return sing * one_minus_pow(u, p);
    double s = sing * one_minus_pow_lin(u, p);
    // grad_z H0(z,y).(z-y) = -(n-2) c_n (z-y*).(z-y) |z-y*|^{-n}
    const double zdot = rho * rho + (t + t_y) * (t - t_y);
    const double gH = -(n - 2.0) * cn * zdot * std::pow(rp, -n);
    s += (2.0 * p * std::pow(cn, p - 1.0) / m) * gH *
         std::pow(rm, -(n - 2.0) * (p - 1.0));
    return s;
  };
  auto vol_f = [&](double rho, double t) {
    const double rx = std::sqrt(rho * rho + (t - t_x) * (t - t_x));
    const double rxs = std::sqrt(rho * rho + (t + t_x) * (t + t_x));
    const double G0 = cn * (std::pow(rx, 2 - n) - std::pow(rxs, 2 - n));
    return G0 * sigma(rho, t);
  };

  const double sep = std::abs(t_x - t_y);
  std::vector<AxisCenter> centers;
  const double sx = 0.1 * std::max(sep > 0 ? std::min(sep, t_x) : t_x, 1e-9);
  const double sy = 0.1 * std::max(sep > 0 ? std::min(sep, t_y) : t_y, 1e-9);
  const double exp_x = (sep == 0.0) ? 1.0 - (n - 2.0) * (p - 1.0) : 1.0;
  const double exp_y = n - 1.0 - (n - 2.0) * (p - 1.0);
  if (sep == 0.0)
    centers.push_back({t_x, sx, exp_x});
  else if (t_x < t_y) {
    centers.push_back({t_x, sx, exp_x});
    centers.push_back({t_y, sy, exp_y});
  } else {
    centers.push_back({t_y, sy, exp_y});
    centers.push_back({t_x, sx, exp_x});
  }
  // far field: G0 ~ s^{-n} dipole, sigma ~ s^{-(n-2)p}
  Integral vol = halfspace_volume(n, centers, vol_f, cfg, (n - 2.0) * p + 1.0);

  // boundary term: P0(x,y') = (n-2) c_n 2 x_n |x-y'|^{-n} against the data
  // alpha_eff |y'-y|^{2-(n-2)p}; radial reduction with r = tan(theta)
  const double acoef = alpha_eff_of(ac, br);
  const double b1 = (n - 2.0) * p - 2.0;
  auto bnd_f = [&](double th) {
    const double r = std::tan(th);
    const double sec2 = 1.0 + r * r;
    const double dx2 = r * r + t_x * t_x;
    const double dy2 = r * r + t_y * t_y;
    return std::pow(r, n - 2) * (n - 2.0) * cn * 2.0 * t_x * std::pow(dx2, -0.5 * n) *
           acoef * std::pow(dy2, -0.5 * b1) * sec2;
  };
  const double bval = unit_sphere_area(n - 1) * gl_panel(bnd_f, 0.0, 0.5 * M_PI, 128);

  Integral out;
  out.value = vol.value + bval;
  out.err = vol.err + 1e-11 * std::abs(bval);
  return out;
}

ScalingReport p1_scaling_check(int n, const CriterionConfig& cfg) {
  require_n(n, "p1_scaling_check");
  ScalingReport rep;
  W0Eval w = w0_derivative(n, 1.0, cfg);
  rep.route_repr = w.total;
  Integral diag = htilde0_axis(1.0, 1.0, n, 1.0, cfg);
  rep.route_scaling = 0.5 * (4.0 - n) * diag.value;
  rep.ratio = rep.route_repr / rep.route_scaling;
  rep.err = w.err + 0.5 * (n - 4.0) * diag.err;
  rep.t_values = {0.5, 1.0, 2.0};
  double mn = 1e300, mx = -1e300;
  for (double t : rep.t_values) {
    Integral d = htilde0_axis(t, t, n, 1.0, cfg);
    const double scaled = std::pow(t, n - 4.0) * d.value;
    rep.scaled_diag.push_back(scaled);
    mn = std::min(mn, scaled);
    mx = std::max(mx, scaled);
  }
  rep.scaling_spread = (mx - mn) / std::abs(0.5 * (mx + mn));
  return rep;
}

ContinuityScan continuity_scan(int n, const std::vector<double>& p_grid,
                               const CriterionConfig& cfg) {
  require_n(n, "continuity_scan");
  ContinuityScan scan;
  for (double p : p_grid) {
    CriterionReport r = criterion(n, p, cfg);
    ContinuityRow row;
    row.p = p;
    row.F = r.F;
    row.Gv = r.Gv;
    row.diff = r.diff;
    row.err = r.err;
    row.verdict = r.verdict;
    scan.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < scan.rows.size(); ++i) {
    const double dp = scan.rows[i + 1].p - scan.rows[i].p;
    if (dp <= 0) continue;
    scan.max_dF_dp =
        std::max(scan.max_dF_dp, std::abs(scan.rows[i + 1].F - scan.rows[i].F) / dp);
    scan.max_dG_dp =
        std::max(scan.max_dG_dp, std::abs(scan.rows[i + 1].Gv - scan.rows[i].Gv) / dp);
  }
  if (!scan.rows.empty()) {
    const double s0 = scan.rows.front().diff;
    scan.sign_persist_until = scan.rows.front().p;
    for (const auto& r : scan.rows) {
      if (r.verdict == Verdict::holds && r.diff * s0 > 0.0)
        scan.sign_persist_until = r.p;
      else
        break;
    }
  }
  return scan;
}

ConvergenceProbe rescaled_convergence_probe(const std::vector<double>& kappa_grid, int n,
                                            double p, const BallDomain& dom,
                                            const CriterionConfig& cfg) {
  require_n(n, "rescaled_convergence_probe");
  // the ball must touch the hyperplane t = 0 at the origin: center = R e_n
  {
    Point expect(n, 0.0);
    expect[n - 1] = dom.radius;
    if (dist(expect, dom.center) > 1e-12 * dom.radius)
      throw std::invalid_argument(
          "rescaled_convergence_probe: ball center must be radius * e_n");
  }
  AlphaConstants ac = gtilde_field::alpha_constants(n, p);
  gtilde_field::SingularQuadConfig gcfg;
  gcfg.tol = cfg.tol;

  const std::vector<double> patch = {0.8, 0.9, 1.0, 1.1, 1.2};
  std::vector<double> w0(patch.size());
  for (std::size_t i = 0; i < patch.size(); ++i)
    w0[i] = htilde0_axis(patch[i], 1.0, n, p, cfg).value;

  ConvergenceProbe probe;
  probe.w0_at_en = w0[2];
  const double expo = p * (n - 2.0) - 2.0;
  double last_err = 0.0;
  for (double kappa : kappa_grid) {
    double sup = 0.0;
    double at_en = 0.0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
      Point x(n, 0.0), y(n, 0.0);
      x[n - 1] = kappa * patch[i];
      y[n - 1] = kappa;
      double wk;
      if (patch[i] == 1.0) {
        auto hv = gtilde_field::htilde_diag(x, dom, p, ac, gcfg);
        wk = std::pow(kappa, expo) * hv.value;
        last_err = std::pow(kappa, expo) * hv.quad_error;
        at_en = wk;
      } else {
        auto hv = gtilde_field::htilde_greenrep(x, y, dom, p, ac, gcfg);
        wk = std::pow(kappa, expo) * hv.value;
      }
      sup = std::max(sup, std::abs(wk - w0[i]));
    }
    probe.rows.push_back({kappa, sup});
    probe.wk_extrap_at_en = at_en;
  }
  probe.decreasing = true;
  for (std::size_t i = 0; i + 1 < probe.rows.size(); ++i)
    if (probe.rows[i + 1].sup_dist > probe.rows[i].sup_dist) probe.decreasing = false;
  probe.err = last_err;
  return probe;
}

}  // namespace halfspace
}  // namespace lanelab
