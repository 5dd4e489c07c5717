#ifndef LANELAB_POHOZAEV_HPP
#define LANELAB_POHOZAEV_HPP

#include <functional>
#include <vector>

#include "lanelab/geometry.hpp"
#include "lanelab/quadrature.hpp"

namespace lanelab {
namespace pohozaev {

// A field sampler: value and gradient at a point.
struct Field {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> grad;
};

// Central-difference gradient wrapper for samplers without analytic gradients.
Field with_fd_gradient(std::function<double(const Point&)> value, double h = 1e-5);

struct PohozaevResult {
  double L = 0.0;  // -oint(du_nu dv_j + dv_nu du_j) + oint (grad u . grad v) nu_j
  double R = 0.0;  // oint v^{p+1} nu_j/(p+1) + oint u^{q+1} nu_j/(q+1)
  double residual = 0.0;
};

// Local identity on the sphere boundary of D = B(center, radius), axis j.
PohozaevResult pohozaev_residual(const Field& u, const Field& v, const Point& center,
                                 double radius, int j, double p, double q,
                                 int order = 32);

struct FluxRow {
  double r = 0.0;
  double I = 0.0;
};

struct FluxReport {
  std::vector<FluxRow> rows;
  double spread = 0.0;  // max |I(r) - I(r')|
};

// I(r) = oint [dA_nu dB_j + dB_nu dA_j - (grad A . grad B) nu_j] dS over
// spheres B(center, r); constant in r for harmonic A, B (equals the spec's
// 2 dA_nu dA_j - |grad A|^2 nu_j form when A = B).
FluxReport flux_constancy(const Field& A, const Field& B, const Point& center,
                          const std::vector<double>& r_list, int j, int order = 32);

// Quadrature exactness diagnostic: max_ij |oint x_i x_j dS - |S^{n-1}| d_ij/n|
// on the unit sphere at the given order.
double sphere_rule_moment_error(int n, int order);

}  // namespace pohozaev
}  // namespace lanelab

#endif
