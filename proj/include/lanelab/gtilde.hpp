#ifndef LANELAB_GTILDE_HPP
#define LANELAB_GTILDE_HPP

#include <vector>

#include "lanelab/geometry.hpp"
#include "lanelab/quadrature.hpp"

namespace lanelab {
namespace gtilde_field {

// Coefficients of the C^1 regular part.  The computation uses the values for
// which -Delta(alpha1 |x|^{2-(n-2)p}) = c_n^p |x|^{-(n-2)p} holds exactly,
// i.e. alpha1 [(n-2)p-2][n-(n-2)p] = c_n^p; the transcribed values carry the
// opposite sign of one denominator factor and are kept only for traceability.
struct AlphaConstants {
  int n = 5;
  double p = 1.0;
  double alpha1 = 0.0, alpha2 = 0.0;              // pde-consistent (authoritative)
  double alpha1_paper = 0.0, alpha2_paper = 0.0;  // literal transcription
  bool sign_discrepancy = false;
};

AlphaConstants alpha_constants(int n, double p);

enum class Branch { low, high };  // split at p = (n-1)/(n-2)

Branch branch_of(int n, double p);

struct SingularQuadConfig {
  double tol = 1e-7;     // target absolute error
  int n_theta = 72;      // axisymmetric polar resolution
  int n_psi = 18, n_chi = 18;  // spider direction resolution
  int max_refine = 2;
  bool want_grad = false;
};

struct GtildeEval {
  double value = 0.0;
  Point grad_x;
  double quad_error = 0.0;
  bool converged = true;
};

// Gtilde(x,y) = int_Omega G(x,z) G^p(z,y) dz on a ball, 1 <= p < n/(n-2).
// Pairs collinear with the center reduce to a 2-D quadrature; general pairs
// use the plane-reduced 3-D rule.
GtildeEval gtilde(const Point& x, const Point& y, const BallDomain& dom, double p,
                  const SingularQuadConfig& cfg = {});

struct HtildeEval {
  double value = 0.0;
  Point grad_x;
  Branch branch = Branch::low;
  double quad_error = 0.0;
  bool converged = true;
};

// Regular part by subtraction (x != y):
//   low:  alpha1 |x-y|^{2-(n-2)p} - Gtilde
//   high: alpha1 |x-y|^{2-(n-2)p} - alpha2 H(x,y) |x-y|^{n-(n-2)p} - Gtilde
HtildeEval htilde(const Point& x, const Point& y, const BallDomain& dom, double p,
                  const AlphaConstants& ac, const SingularQuadConfig& cfg = {});

// Diagonal values by the Green representation (finite at x = y, no ∞-∞
// cancellation): Htilde(x,y) = int G(x,z) sigma_y(z) dz + boundary term with
// the ball Poisson kernel; valid whenever x, y, center are collinear.
HtildeEval htilde_greenrep(const Point& x, const Point& y, const BallDomain& dom,
                           double p, const AlphaConstants& ac,
                           const SingularQuadConfig& cfg = {});

inline HtildeEval htilde_diag(const Point& x, const BallDomain& dom, double p,
                              const AlphaConstants& ac,
                              const SingularQuadConfig& cfg = {}) {
  return htilde_greenrep(x, x, dom, p, ac, cfg);
}

struct GrowthRow {
  double d = 0.0;
  double phi = 0.0;          // Htilde(x,x)
  double dphi_half = 0.0;    // (1/2) d/dt Htilde(x+t n, x+t n)
  double dphi_direct = 0.0;  // n . grad_x Htilde(x,y)|_{y=x}
};

struct GrowthScan {
  std::vector<GrowthRow> rows;
  double slope = 0.0;         // log-log slope of dphi_half vs d
  double slope_direct = 0.0;
  bool positive_sign = false;
  double slope_residual = 0.0;
};

// Normal derivative of the diagonal along a fixed ray; expected growth
// d^{1-(n-2)p} with positive sign.
GrowthScan boundary_growth_scan(const BallDomain& dom, double p,
                                const std::vector<double>& d_grid,
                                const SingularQuadConfig& cfg = {});

}  // namespace gtilde_field
}  // namespace lanelab

#endif
