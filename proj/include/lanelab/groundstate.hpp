#ifndef LANELAB_GROUNDSTATE_HPP
#define LANELAB_GROUNDSTATE_HPP

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "lanelab/ode.hpp"

namespace lanelab {
namespace groundstate {

struct ExponentPair {
  int n = 3;
  double p = 1.0;
  double q = 1.0;
};

// q on the critical hyperbola: 1/(p+1) + 1/(q+1) = (n-2)/n.
double critical_q(int n, double p);

// Subcritical shift: 1/(p+1) + 1/(q_eps+1) = (n-2)/n + eps; q_0 = critical_q.
double q_epsilon(int n, double p, double eps);

// Critical pair constructor with invariant checks (pq > 1, p <= q).
ExponentPair critical_pair(int n, double p);

struct ShootingConfig {
  double r_max = 1e3;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double r_series = 1e-6;     // series start radius
  double bisect_rel = 1e-12;  // relative v0 bracket width at stop
  double v0_lo = 1e-3, v0_hi = 1e3;  // admissible shooting range
  int n_lin = 64;    // output nodes on [r_series, 1]
  int n_log = 320;   // log-spaced output nodes on [1, r_max]
  double residual_threshold = 1e-2;
};

enum class ShotClass { Decay, UCrossed, VCrossed };

struct Trajectory {
  ShotClass cls = ShotClass::Decay;
  double r_end = 0.0;
  // samples at accepted steps (or requested nodes)
  std::vector<double> r, u, du, v, dv;
  // constant-mode indicators at r_end (decay runs only)
  double u_inf_ind = 0.0, v_inf_ind = 0.0;
  // accumulated int_0^{r_end} {u^q, v^p, u^{q+1}, v^{p+1}} r^{n-1} dr
  std::array<double, 4> acc = {0.0, 0.0, 0.0, 0.0};
};

// Integrate u'' + (n-1)u'/r = -v^p, v'' + (n-1)v'/r = -u^q from u(0)=1,
// v(0)=v0, u'(0)=v'(0)=0 until a zero crossing or r_max.
Trajectory integrate_system(const ExponentPair& exps, double v0, const ShootingConfig& cfg,
                            const std::vector<double>* nodes = nullptr);

enum class Regime { p_gt, p_eq, p_lt };

struct DecayFit {
  Regime regime = Regime::p_gt;
  double a = 0.0;  // lim r^{n-2} V
  double b = 0.0;  // regime-model coefficient of U
  double w0 = 0.0, w1 = 0.0;  // fit window
  double residual = 0.0;
};

struct ProfilePair {
  ExponentPair exps;
  double shoot_param = 0.0;  // v(0)
  std::vector<double> grid, u, du, v, dv;
  double r_reliable = 0.0;  // profile integrated up to here; tail model beyond
  DecayFit tail;
  // accumulated integrals int_0^{r_reliable} f r^{n-1} dr
  double mU = 0.0, mV = 0.0, eU = 0.0, eV = 0.0;

  // Quintic-Hermite evaluation (tail model beyond r_reliable).
  double u_at(double r) const;
  double v_at(double r) const;
  double du_at(double r) const;
  double dv_at(double r) const;
};

ProfilePair shoot_groundstate(const ExponentPair& exps, const ShootingConfig& cfg = {});

Regime classify_regime(const ExponentPair& exps);

DecayFit fit_decay(const ProfilePair& profile, const ExponentPair& exps,
                   double w0 = 0.0, double w1 = 0.0);

struct MassConstants {
  double A_U = 0.0;  // int U^q
  double A_V = 0.0;  // int V^p; +inf when p <= n/(n-2)
  double S = 0.0;    // Sobolev quotient of the profile
  double E_U = 0.0;  // int U^{q+1}
  double E_V = 0.0;  // int V^{p+1}
  bool A_V_finite = true;
};

MassConstants compute_mass(const ProfilePair& profile, const ExponentPair& exps);

// Aubin-Talenti bubble (1 + r^2/(n(n-2)))^{-(n-2)/2}; the exact ground state
// at the symmetric critical exponent p = q = (n+2)/(n-2).
double bubble(int n, double r);

}  // namespace groundstate
}  // namespace lanelab

#endif
