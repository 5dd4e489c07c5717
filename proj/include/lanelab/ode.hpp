#ifndef LANELAB_ODE_HPP
#define LANELAB_ODE_HPP

#include <functional>
#include <vector>

namespace lanelab {

// Adaptive embedded Dormand-Prince 5(4) with step-bisected event location.
// State is a small vector; the RHS writes dy/dt into dydt.

using OdeRhs = std::function<void(double t, const std::vector<double>& y,
                                  std::vector<double>& dydt)>;

// Event: sign change of event_fn across an accepted step stops integration at
// the crossing (located by bisection on the step).
using OdeEvent = std::function<double(double t, const std::vector<double>& y)>;

struct OdeOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double h_init = 1e-4;
  double h_min = 1e-14;
  double h_max = 1e30;
  long max_steps = 20000000;
};

struct OdeStatus {
  enum Kind { ReachedEnd, EventStop, StepUnderflow } kind = ReachedEnd;
  double t = 0.0;
  std::vector<double> y;
  int event_index = -1;  // which event fired
  long n_steps = 0;
};

class DormandPrince {
 public:
  DormandPrince(OdeRhs rhs, OdeOptions opts) : rhs_(std::move(rhs)), opts_(opts) {}

  // Integrate from (t0,y0) to t_end; events optional.  `sample` (if set) is
  // called after every accepted step.
  OdeStatus integrate(double t0, const std::vector<double>& y0, double t_end,
                      const std::vector<OdeEvent>& events = {},
                      const std::function<void(double, const std::vector<double>&)>&
                          sample = nullptr);

 private:
  OdeRhs rhs_;
  OdeOptions opts_;

  bool step(double t, const std::vector<double>& y, double h,
            std::vector<double>& y_out, double& err_norm);
};

}  // namespace lanelab

#endif
