#include "lanelab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace lanelab {

namespace {

// Dormand-Prince 5(4) tableau
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
             A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
             A64 = 49.0 / 176, A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
             B6 = 11.0 / 84;
const double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
             E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

bool DormandPrince::step(double t, const std::vector<double>& y, double h,
                         std::vector<double>& y_out, double& err_norm) {
  const std::size_t m = y.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m);

  rhs_(t, y, k1);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * A21 * k1[i];
  rhs_(t + h / 5, tmp, k2);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
  rhs_(t + 3 * h / 10, tmp, k3);
  for (std::size_t i = 0; i < m; ++i)
    tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
  rhs_(t + 4 * h / 5, tmp, k4);
  for (std::size_t i = 0; i < m; ++i)
    tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
  rhs_(t + 8 * h / 9, tmp, k5);
  for (std::size_t i = 0; i < m; ++i)
    tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
  rhs_(t + h, tmp, k6);
  for (std::size_t i = 0; i < m; ++i)
    y_out[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
  rhs_(t + h, y_out, k7);

  err_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                          E7 * k7[i]);
    const double sc = opts_.abs_tol +
                      opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y_out[i]));
    err_norm = std::max(err_norm, std::abs(e) / sc);
  }
  return err_norm <= 1.0;
}

OdeStatus DormandPrince::integrate(
    double t0, const std::vector<double>& y0, double t_end,
    const std::vector<OdeEvent>& events,
    const std::function<void(double, const std::vector<double>&)>& sample) {
  OdeStatus st;
  st.t = t0;
  st.y = y0;
  double h = std::min(opts_.h_init, t_end - t0);

  std::vector<double> ev_prev(events.size());
  for (std::size_t j = 0; j < events.size(); ++j) ev_prev[j] = events[j](t0, y0);

  std::vector<double> y_new(y0.size());
  while (st.t < t_end) {
    if (st.n_steps++ > opts_.max_steps) {
      st.kind = OdeStatus::StepUnderflow;
      return st;
    }
    h = std::min({h, t_end - st.t, opts_.h_max});
    double err;
    if (!step(st.t, st.y, h, y_new, err)) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < opts_.h_min) {
        st.kind = OdeStatus::StepUnderflow;
        return st;
      }
      continue;
    }

    // event check on the accepted step
    int fired = -1;
    double ev_new = 0.0;
    for (std::size_t j = 0; j < events.size(); ++j) {
      ev_new = events[j](st.t + h, y_new);
      if (ev_prev[j] > 0.0 && ev_new <= 0.0) {
        fired = static_cast<int>(j);
        break;
      }
    }
    if (fired >= 0) {
      // locate by bisection on the substep
      double a = 0.0, b = h;
      std::vector<double> ya = st.y, yb = y_new, ym(st.y.size());
      for (int it = 0; it < 80 && (b - a) > opts_.h_min; ++it) {
        const double hm = 0.5 * (a + b);
        double e2;
        step(st.t, st.y, hm, ym, e2);
        if (events[fired](st.t + hm, ym) > 0.0) {
          a = hm;
          ya = ym;
        } else {
          b = hm;
          yb = ym;
        }
      }
      st.t += b;
      st.y = yb;
      st.kind = OdeStatus::EventStop;
      st.event_index = fired;
      if (sample) sample(st.t, st.y);
      return st;
    }

    st.t += h;
    st.y = y_new;
    for (std::size_t j = 0; j < events.size(); ++j) ev_prev[j] = events[j](st.t, st.y);
    if (sample) sample(st.t, st.y);
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
  }
  st.kind = OdeStatus::ReachedEnd;
  return st;
}

}  // namespace lanelab
