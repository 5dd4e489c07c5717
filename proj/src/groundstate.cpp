#include "lanelab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lanelab/geometry.hpp"

namespace lanelab {
namespace groundstate {

namespace {

double powc(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

// tail exponent of U per regime
double beta_u(const ExponentPair& e, Regime rg) {
  if (rg == Regime::p_lt) return e.p * (e.n - 2) - 2;
  return static_cast<double>(e.n - 2);
}

}  // namespace

double critical_q(int n, double p) {
  if (n < 3) throw std::invalid_argument("critical_q: n >= 3 required");
  const double rhs = (n - 2.0) / n - 1.0 / (p + 1.0);
  if (rhs <= 0.0)
    throw std::invalid_argument("critical_q: p <= 2/(n-2), no finite critical q");
  return 1.0 / rhs - 1.0;
}

double q_epsilon(int n, double p, double eps) {
  if (eps < 0.0) throw std::invalid_argument("q_epsilon: eps >= 0 required");
  const double rhs = (n - 2.0) / n + eps - 1.0 / (p + 1.0);
  if (rhs <= 0.0) throw std::invalid_argument("q_epsilon: exponent relation degenerate");
  const double q = 1.0 / rhs - 1.0;
  if (q <= 1.0) throw std::invalid_argument("q_epsilon: eps too large, q_eps <= 1");
  return q;
}

ExponentPair critical_pair(int n, double p) {
  ExponentPair e;
  e.n = n;
  e.p = p;
  e.q = critical_q(n, p);
  if (e.p * e.q <= 1.0) throw std::invalid_argument("critical_pair: pq > 1 required");
  if (e.p > e.q) throw std::invalid_argument("critical_pair: p <= q convention");
  return e;
}

Regime classify_regime(const ExponentPair& e) {
  const double thr = static_cast<double>(e.n) / (e.n - 2);
  if (std::abs(e.p - thr) < 1e-12) return Regime::p_eq;
  return e.p > thr ? Regime::p_gt : Regime::p_lt;
}

Trajectory integrate_system(const ExponentPair& exps, double v0, const ShootingConfig& cfg,
                            const std::vector<double>* nodes) {
  if (v0 <= 0.0) throw std::invalid_argument("integrate_system: v0 > 0 required");
  const int n = exps.n;
  const double p = exps.p, q = exps.q;

  OdeRhs rhs = [n, p, q](double r, const std::vector<double>& y, std::vector<double>& d) {
    d[0] = y[1];
    d[1] = -powc(y[2], p) - (n - 1) * y[1] / r;
    d[2] = y[3];
    d[3] = -powc(y[0], q) - (n - 1) * y[3] / r;
    if (y.size() > 4) {
      const double rn = std::pow(r, n - 1);
      d[4] = powc(y[0], q) * rn;
      d[5] = powc(y[2], p) * rn;
      d[6] = powc(y[0], q + 1) * rn;
      d[7] = powc(y[2], p + 1) * rn;
    }
  };

  OdeOptions oo;
  oo.rel_tol = cfg.rel_tol;
  oo.abs_tol = cfg.abs_tol;
  oo.h_init = cfg.r_series;

  // series start: u = 1 - v0^p r^2/(2n), v = v0 - r^2/(2n)
  const double rs = cfg.r_series;
  std::vector<double> y0;
  if (nodes)
    y0 = {1.0 - std::pow(v0, p) * rs * rs / (2 * n), -std::pow(v0, p) * rs / n,
          v0 - rs * rs / (2 * n), -rs / n, 0.0, 0.0, 0.0, 0.0};
  else
    y0 = {1.0 - std::pow(v0, p) * rs * rs / (2 * n), -std::pow(v0, p) * rs / n,
          v0 - rs * rs / (2 * n), -rs / n};

  std::vector<OdeEvent> events = {
      [](double, const std::vector<double>& y) { return y[0]; },
      [](double, const std::vector<double>& y) { return y[2]; }};

  Trajectory tr;
  DormandPrince dp(rhs, oo);

  if (!nodes) {
    OdeStatus st = dp.integrate(rs, y0, cfg.r_max, events);
    tr.r_end = st.t;
    if (st.kind == OdeStatus::StepUnderflow)
      throw std::runtime_error("integrate_system: step underflow at r=" +
                               std::to_string(st.t));
    if (st.kind == OdeStatus::EventStop)
      tr.cls = (st.event_index == 0) ? ShotClass::UCrossed : ShotClass::VCrossed;
    else
      tr.cls = ShotClass::Decay;
    tr.r.push_back(st.t);
    tr.u.push_back(st.y[0]);
    tr.du.push_back(st.y[1]);
    tr.v.push_back(st.y[2]);
    tr.dv.push_back(st.y[3]);
    if (tr.cls == ShotClass::Decay) {
      const double bu = beta_u(exps, classify_regime(exps));
      tr.u_inf_ind = st.y[0] + st.y[1] * st.t / bu;
      tr.v_inf_ind = st.y[2] + st.y[3] * st.t / (n - 2);
    }
    return tr;
  }

  // node-by-node integration (final profile run)
  std::vector<double> y = y0;
  double r = rs;
  tr.r.push_back(r);
  tr.u.push_back(y[0]);
  tr.du.push_back(y[1]);
  tr.v.push_back(y[2]);
  tr.dv.push_back(y[3]);
  for (double rn : *nodes) {
    if (rn <= r) continue;
    OdeStatus st = dp.integrate(r, y, rn, events);
    r = st.t;
    y = st.y;
    tr.r.push_back(r);
    tr.u.push_back(y[0]);
    tr.du.push_back(y[1]);
    tr.v.push_back(y[2]);
    tr.dv.push_back(y[3]);
    if (st.kind == OdeStatus::StepUnderflow)
      throw std::runtime_error("integrate_system: step underflow at r=" +
                               std::to_string(r));
    if (st.kind == OdeStatus::EventStop) {
      tr.cls = (st.event_index == 0) ? ShotClass::UCrossed : ShotClass::VCrossed;
      tr.r_end = r;
      tr.acc = {y[4], y[5], y[6], y[7]};
      return tr;
    }
  }
  tr.cls = ShotClass::Decay;
  tr.r_end = r;
  const double bu = beta_u(exps, classify_regime(exps));
  tr.u_inf_ind = y[0] + y[1] * r / bu;
  tr.v_inf_ind = y[2] + y[3] * r / (n - 2);
  // stash accumulators in du/dv? no: return via Trajectory extension below
  tr.acc = {y.size() > 4 ? y[4] : 0.0, y.size() > 4 ? y[5] : 0.0,
            y.size() > 4 ? y[6] : 0.0, y.size() > 4 ? y[7] : 0.0};
  return tr;
}

namespace {

// side of the separatrix: +1 (v0 too large), -1 (v0 too small), 0 undecided
int side_of(const Trajectory& tr, double floor_u, double floor_v) {
  if (tr.cls == ShotClass::UCrossed) return +1;
  if (tr.cls == ShotClass::VCrossed) return -1;
  if (tr.u_inf_ind < -floor_u) return +1;
  if (tr.v_inf_ind < -floor_v) return -1;
  if (tr.u_inf_ind > floor_u) return -1;
  return 0;
}

}  // namespace

ProfilePair shoot_groundstate(const ExponentPair& exps, const ShootingConfig& cfg) {
  const double floor_u = 1e3 * cfg.rel_tol, floor_v = 1e3 * cfg.rel_tol;

  // bracket scan over a log grid of v0
  double lo = 0.0, hi = 0.0;
  {
    const int K = 40;
    double prev_v0 = 0.0;
    int prev_side = 0;
    for (int i = 0; i <= K; ++i) {
      const double v0 =
          cfg.v0_lo * std::pow(cfg.v0_hi / cfg.v0_lo, static_cast<double>(i) / K);
      Trajectory tr = integrate_system(exps, v0, cfg);
      const int s = side_of(tr, floor_u, floor_v);
      if (s == 0) {  // already on the separatrix at scan resolution
        lo = v0 * (1 - 1e-3);
        hi = v0 * (1 + 1e-3);
        break;
      }
      if (prev_side == -1 && s == +1) {
        lo = prev_v0;
        hi = v0;
        break;
      }
      prev_side = s;
      prev_v0 = v0;
    }
    if (hi == 0.0)
      throw std::runtime_error("shoot_groundstate: no bracket in v0 range [" +
                               std::to_string(cfg.v0_lo) + "," + std::to_string(cfg.v0_hi) +
                               "]");
  }

  // bisection with monotonicity audit
  double last_lo = lo, last_hi = hi;
  while ((hi - lo) / hi > cfg.bisect_rel) {
    const double mid = 0.5 * (lo + hi);
    Trajectory tr = integrate_system(exps, mid, cfg);
    const int s = side_of(tr, floor_u, floor_v);
    if (s == 0) break;
    if (s > 0)
      hi = mid;
    else
      lo = mid;
    if (hi > last_hi + 1e-30 || lo < last_lo - 1e-30)
      throw std::runtime_error("shoot_groundstate: non-monotone classification");
    last_lo = lo;
    last_hi = hi;
  }
  const double v0 = 0.5 * (lo + hi);

  // output nodes: linear on [r_series, 1], log on [1, r_max]
  std::vector<double> nodes;
  for (int i = 1; i <= cfg.n_lin; ++i)
    nodes.push_back(cfg.r_series + (1.0 - cfg.r_series) * i / cfg.n_lin);
  for (int i = 1; i <= cfg.n_log; ++i)
    nodes.push_back(std::pow(cfg.r_max, static_cast<double>(i) / cfg.n_log));

  Trajectory tr = integrate_system(exps, v0, cfg, &nodes);

  ProfilePair prof;
  prof.exps = exps;
  prof.shoot_param = v0;
  prof.grid = tr.r;
  prof.u = tr.u;
  prof.du = tr.du;
  prof.v = tr.v;
  prof.dv = tr.dv;
  prof.r_reliable = tr.r_end;
  prof.mU = tr.acc[0];
  prof.mV = tr.acc[1];
  prof.eU = tr.acc[2];
  prof.eV = tr.acc[3];
  prof.tail = fit_decay(prof, exps);
  return prof;
}

namespace {

int locate(const std::vector<double>& g, double r) {
  auto it = std::upper_bound(g.begin(), g.end(), r);
  int i = static_cast<int>(it - g.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(g.size()) - 2);
}

// quintic Hermite on [r0,r1] from (f, f', f'') at both ends
double quintic(double r, double r0, double r1, double f0, double d0, double s0, double f1,
               double d1, double s1, int deriv) {
  const double h = r1 - r0, x = (r - r0) / h;
  // basis in terms of x with values/derivs scaled by h
  const double D0 = d0 * h, D1 = d1 * h, S0 = s0 * h * h, S1 = s1 * h * h;
  // quintic coefficients (c0..c5) solving the two-point Taylor data
  const double c0 = f0, c1 = D0, c2 = 0.5 * S0;
  const double c3 = 10 * (f1 - f0) - 6 * D0 - 4 * D1 + (S1 - 3 * S0) * 0.5;
  const double c4 = -15 * (f1 - f0) + 8 * D0 + 7 * D1 + 1.5 * S0 - S1;
  const double c5 = 6 * (f1 - f0) - 3 * (D0 + D1) + 0.5 * (S1 - S0);
  if (deriv == 0)
    return c0 + x * (c1 + x * (c2 + x * (c3 + x * (c4 + x * c5))));
  return (c1 + x * (2 * c2 + x * (3 * c3 + x * (4 * c4 + x * 5 * c5)))) / h;
}

double tail_model_u(const DecayFit& t, int n, double p, double r, int deriv) {
  double be, lg = 1.0;
  if (t.regime == Regime::p_lt)
    be = p * (n - 2) - 2;
  else
    be = n - 2;
  if (t.regime == Regime::p_eq) lg = std::log(r);
  const double val = t.b * lg * std::pow(r, -be);
  if (deriv == 0) return val;
  double d = -be * val / r;
  if (t.regime == Regime::p_eq) d += t.b * std::pow(r, -be) / r;
  return d;
}

double tail_model_v(const DecayFit& t, int n, double r, int deriv) {
  const double val = t.a * std::pow(r, 2 - n);
  return deriv == 0 ? val : (2 - n) * val / r;
}

double profile_eval(const ProfilePair& pf, double r, bool want_u, int deriv) {
  const auto& e = pf.exps;
  if (r >= pf.r_reliable) {
    return want_u ? tail_model_u(pf.tail, e.n, e.p, r, deriv)
                  : tail_model_v(pf.tail, e.n, r, deriv);
  }
  if (r <= pf.grid.front()) {
    // series around 0
    const double v0 = pf.shoot_param;
    if (want_u) {
      const double c = std::pow(v0, e.p) / (2 * e.n);
      return deriv == 0 ? 1.0 - c * r * r : -2 * c * r;
    }
    const double c = 1.0 / (2 * e.n);
    return deriv == 0 ? v0 - c * r * r : -2 * c * r;
  }
  const int i = locate(pf.grid, r);
  const double r0 = pf.grid[i], r1 = pf.grid[i + 1];
  auto sec = [&](int j) {
    // u'' from the ODE at node j
    const double rr = pf.grid[j];
    if (want_u) return -std::pow(std::max(pf.v[j], 0.0), e.p) - (e.n - 1) * pf.du[j] / rr;
    return -std::pow(std::max(pf.u[j], 0.0), e.q) - (e.n - 1) * pf.dv[j] / rr;
  };
  if (want_u)
    return quintic(r, r0, r1, pf.u[i], pf.du[i], sec(i), pf.u[i + 1], pf.du[i + 1],
                   sec(i + 1), deriv);
  return quintic(r, r0, r1, pf.v[i], pf.dv[i], sec(i), pf.v[i + 1], pf.dv[i + 1],
                 sec(i + 1), deriv);
}

}  // namespace

double ProfilePair::u_at(double r) const { return profile_eval(*this, r, true, 0); }
double ProfilePair::v_at(double r) const { return profile_eval(*this, r, false, 0); }
double ProfilePair::du_at(double r) const { return profile_eval(*this, r, true, 1); }
double ProfilePair::dv_at(double r) const { return profile_eval(*this, r, false, 1); }

DecayFit fit_decay(const ProfilePair& profile, const ExponentPair& exps, double w0,
                   double w1) {
  DecayFit fit;
  fit.regime = classify_regime(exps);
  if (w1 <= 0.0) {
    w1 = profile.r_reliable;
    w0 = w1 / 10.0;
  }
  fit.w0 = w0;
  fit.w1 = w1;

  const int n = exps.n;
  const double be_u = beta_u(exps, fit.regime);

  // collect window samples
  std::vector<double> rs, us, vs;
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    const double r = profile.grid[i];
    if (r < w0 || r > w1) continue;
    if (profile.u[i] <= 0.0 || profile.v[i] <= 0.0) continue;
    rs.push_back(r);
    us.push_back(profile.u[i]);
    vs.push_back(profile.v[i]);
  }
  if (rs.size() < 8) throw std::runtime_error("fit_decay: window too small");

  // 2-parameter LSQ  w = coef + c * corr(r)  against the compensated samples
  auto fit2 = [&](const std::vector<double>& w,
                  const std::function<double(double)>& corr) {
    double s11 = w.size(), s1c = 0, scc = 0, s1w = 0, scw = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double c = corr(rs[i]);
      s1c += c;
      scc += c * c;
      s1w += w[i];
      scw += c * w[i];
    }
    const double det = s11 * scc - s1c * s1c;
    const double coef = (scc * s1w - s1c * scw) / det;
    const double cc = (s11 * scw - s1c * s1w) / det;
    return std::pair<double, double>(coef, cc);
  };

  // V ~ a r^{2-n} (1 + c r^{-2})
  std::vector<double> wv(rs.size()), wu(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) wv[i] = std::pow(rs[i], n - 2) * vs[i];
  auto [a, ca] = fit2(wv, [](double r) { return 1.0 / (r * r); });
  fit.a = a;

  // U model per regime
  std::function<double(double)> corr_u;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double m = std::pow(rs[i], be_u);
    if (fit.regime == Regime::p_eq) m /= std::log(rs[i]);
    wu[i] = m * us[i];
  }
  if (fit.regime == Regime::p_eq)
    corr_u = [](double r) { return 1.0 / std::log(r); };
  else {
    const double tau = (fit.regime == Regime::p_lt)
                           ? std::clamp((n - 2) - be_u, 0.5, 2.0)
                           : 2.0;
    corr_u = [tau](double r) { return std::pow(r, -tau); };
  }
  auto [b, cb] = fit2(wu, corr_u);
  fit.b = b;

  (void)ca;
  (void)cb;
  // residual of the log-log linear fit with the model exponent pinned:
  // rms of log(compensated samples) about the mean, worst of the two fields
  auto rms_about_mean = [](const std::vector<double>& w) {
    double m = 0.0;
    for (double x : w) m += std::log(x);
    m /= w.size();
    double s = 0.0;
    for (double x : w) s += std::pow(std::log(x) - m, 2);
    return std::sqrt(s / w.size());
  };
  fit.residual = std::max(rms_about_mean(wv), rms_about_mean(wu));
  if (fit.a <= 0.0 || fit.b <= 0.0)
    throw std::runtime_error("fit_decay: nonpositive decay constant");
  return fit;
}

MassConstants compute_mass(const ProfilePair& profile, const ExponentPair& exps) {
  MassConstants mc;
  const int n = exps.n;
  const double p = exps.p, q = exps.q;
  const double area = unit_sphere_area(n);
  const DecayFit& t = profile.tail;
  const double R = profile.r_reliable;
  const double be_u = beta_u(exps, t.regime);

  // tail of int U^q r^{n-1}: exponent n-1 - q*beta_u (log-corrected in p_eq)
  auto power_tail = [&](double coef, double ex, double logpow) {
    // int_R^inf coef * r^ex * log(r)^logpow dr, ex < -1
    if (logpow == 0.0) return -coef * std::pow(R, ex + 1) / (ex + 1);
    // numeric on t = log r
    double s = 0.0;
    const int K = 2000;
    const double t0 = std::log(R), t1 = t0 + 60.0;
    const double h = (t1 - t0) / K;
    for (int i = 0; i <= K; ++i) {
      const double tt = t0 + i * h;
      const double f = coef * std::exp((ex + 1) * tt) * std::pow(tt, logpow);
      s += (i == 0 || i == K) ? 0.5 * f : f;
    }
    return s * h;
  };

  const double logpow_u = (t.regime == Regime::p_eq) ? 1.0 : 0.0;
  const double tail_mU =
      power_tail(std::pow(t.b, q), (n - 1) - q * be_u, logpow_u * q);
  const double tail_eU =
      power_tail(std::pow(t.b, q + 1), (n - 1) - (q + 1) * be_u, logpow_u * (q + 1));
  const double tail_eV = power_tail(std::pow(t.a, p + 1), (n - 1) - (p + 1) * (n - 2), 0.0);

  mc.A_U = area * (profile.mU + tail_mU);
  const double ex_v = (n - 1) - p * (n - 2);
  if (ex_v >= -1.0) {
    mc.A_V = std::numeric_limits<double>::infinity();
    mc.A_V_finite = false;
  } else {
    mc.A_V = area * (profile.mV + power_tail(std::pow(t.a, p), ex_v, 0.0));
  }
  mc.E_U = area * (profile.eU + tail_eU);
  mc.E_V = area * (profile.eV + tail_eV);
  // S = ||Delta U||^{(p+1)/p} / ||U||_{q+1}^{(p+1)/p} with Delta U = -V^p
  mc.S = mc.E_V / std::pow(mc.E_U, (p + 1) / (p * (q + 1)));
  return mc;
}

double bubble(int n, double r) {
  return std::pow(1.0 + r * r / (n * (n - 2.0)), -(n - 2.0) / 2.0);
}

}  // namespace groundstate
}  // namespace lanelab
