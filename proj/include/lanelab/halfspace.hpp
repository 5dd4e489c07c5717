#ifndef LANELAB_HALFSPACE_HPP
#define LANELAB_HALFSPACE_HPP

#include <string>
#include <vector>

#include "lanelab/geometry.hpp"
#include "lanelab/gtilde.hpp"
#include "lanelab/quadrature.hpp"

namespace lanelab {
namespace halfspace {

using gtilde_field::AlphaConstants;
using gtilde_field::Branch;

struct CriterionConfig {
  double R_trunc = 100.0;   // half-space truncation radius around e_n
  double shell_eps = 1e-3;  // inner shell scale around e_n
  double tol = 1e-7;        // target absolute error per integral
  int n_theta = 96;
};

struct Integral {
  double value = 0.0;
  double err = 0.0;  // quadrature + truncation-tail estimate
};

// LHS of the sign condition: the half-space integral of the reflected kernel
// against the branch bracket (stably evaluated).  Branch chosen from (n,p);
// p = 0 is admitted as a sanity mode (bracket vanishes identically).
Integral lhs_integral(int n, double p, const CriterionConfig& cfg = {});

// RHS: (n-2) * alpha_eff * [ 2 int_{R^{n-1}} |y-e_n|^{-(n-2)(p+1)} dy
//                           - 2n int_{R^{n-1}} |y-e_n|^{-((n-2)p+n)} dy ],
// both pieces boundary integrals (the second read as such; a literal
// half-space volume integral of that kernel diverges at y = e_n).
// alpha_eff = alpha1 (low branch) or alpha1 - c_n alpha2 (high branch).
struct RhsEval {
  double value = 0.0;       // (n-2) * alpha_eff * (piece1 - piece2)
  double piece_boundary = 0.0;  // first kernel piece
  double piece_second = 0.0;    // 2n-kernel piece
  double alpha_eff = 0.0;
  double err = 0.0;
};
RhsEval rhs_integral(int n, double p, const AlphaConstants& ac,
                     const CriterionConfig& cfg = {});

enum class Verdict { holds, fails, inconclusive };

struct CriterionReport {
  int n = 0;
  double p = 0.0;
  double F = 0.0;   // LHS
  double Gv = 0.0;  // RHS normalized so diff = F - Gv is proportional to
                    // d/dx_n W_0(e_n) with positive constant (n-2) c_n^{p+1}
  double diff = 0.0;
  double err = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double dW0 = 0.0;  // (n-2) c_n^{p+1} diff
};

CriterionReport criterion(int n, double p, const CriterionConfig& cfg = {});

struct W0Eval {
  double dI1 = 0.0;  // Green-kernel derivative against the volume source
  double dI2 = 0.0;  // Poisson-kernel derivative against the boundary data
  double total = 0.0;
  double err = 0.0;
};

// d/dx_n W_0(e_n) from the representation, assembled independently of
// lhs/rhs_integral.
W0Eval w0_derivative(int n, double p, const CriterionConfig& cfg = {});

// Half-space regular part at an axis pair (t_x e_n, t_y e_n) by the Green
// representation; finite on the diagonal.
Integral htilde0_axis(double t_x, double t_y, int n, double p,
                      const CriterionConfig& cfg = {});

// W_0(t e_n) = Htilde0(t e_n, e_n).
inline Integral w0_axis(double t, int n, double p, const CriterionConfig& cfg = {}) {
  return htilde0_axis(t, 1.0, n, p, cfg);
}

struct ScalingReport {
  double route_repr = 0.0;     // w0_derivative total
  double route_scaling = 0.0;  // (4-n)/2 * Htilde0(e_n,e_n)
  double ratio = 0.0;
  double err = 0.0;
  std::vector<double> t_values;       // {0.5, 1, 2}
  std::vector<double> scaled_diag;    // t^{n-4} Htilde0(t e_n, t e_n)
  double scaling_spread = 0.0;        // max relative spread of scaled_diag
};

// p = 1 cross-validation: derivative route vs the homogeneity identity.
ScalingReport p1_scaling_check(int n, const CriterionConfig& cfg = {});

struct ContinuityRow {
  double p = 0.0;
  double F = 0.0, Gv = 0.0, diff = 0.0, err = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct ContinuityScan {
  std::vector<ContinuityRow> rows;
  double max_dF_dp = 0.0, max_dG_dp = 0.0;  // difference quotients
  double sign_persist_until = 0.0;  // largest grid p with the p=1 verdict sign
};

ContinuityScan continuity_scan(int n, const std::vector<double>& p_grid,
                               const CriterionConfig& cfg = {});

struct ConvergenceProbeRow {
  double kappa = 0.0;
  double sup_dist = 0.0;  // sup over the axis patch of |W_kappa - W_0|
};

struct ConvergenceProbe {
  std::vector<ConvergenceProbeRow> rows;
  bool decreasing = false;
  double w0_at_en = 0.0;       // direct half-space value at e_n
  double wk_extrap_at_en = 0.0;  // smallest-kappa W_kappa at e_n
  double err = 0.0;
};

// W_kappa(z) = kappa^{p(n-2)-2} Htilde(kappa z, kappa e_n) on a ball tangent
// to the origin (center R e_n), probed on an axis patch around e_n.
ConvergenceProbe rescaled_convergence_probe(const std::vector<double>& kappa_grid, int n,
                                            double p, const BallDomain& dom,
                                            const CriterionConfig& cfg = {});

}  // namespace halfspace
}  // namespace lanelab

#endif
