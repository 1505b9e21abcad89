#include "bidomain/ionic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bidomain {

void IonicParams::validate() const {
  if (!(v_peak > v_rest)) throw std::invalid_argument("ionic: v_peak must exceed v_rest");
  if (!(tau_in > 0.0) || !(tau_out > 0.0) || !(tau_open > 0.0) || !(tau_close > 0.0)) {
    throw std::invalid_argument("ionic: time constants must be positive");
  }
}

double i_ion(double v, double w, const IonicParams& p, double c_m) {
  double const u = p.normalized(v);
  double const span = p.v_peak - p.v_rest;
  return -c_m * span * (w * u * u * (1.0 - u) / p.tau_in - u / p.tau_out);
}

double gate_update(double w, double v, double dt, const IonicParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("gate_update: dt must be positive");
  double const rate = p.normalized(v) < p.u_gate ? (1.0 - w) / p.tau_open : -w / p.tau_close;
  return std::clamp(w + dt * rate, 0.0, 1.0);
}

StimulusProtocol StimulusProtocol::defaults(int dim) {
  StimulusProtocol s;
  if (dim == 3) {
    s.sites = {{{0.5, 0.5, 0.5}, 0.0}};
  } else {
    s.sites = {{{0.35, 0.40, 0.0}, 0.0},
               {{0.35, 0.60, 0.0}, 0.0},
               {{0.65, 0.40, 0.0}, 5.0},
               {{0.65, 0.60, 0.0}, 5.0}};
  }
  return s;
}

void StimulusProtocol::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("stimulus: radius must be positive");
  if (!(duration > 0.0)) throw std::invalid_argument("stimulus: duration must be positive");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("stimulus: amplitude must be finite");
}

double stimulus(const Point& x, double t, const StimulusProtocol& s) {
  for (auto const& site : s.sites) {
    if (t < site.start || t >= site.start + s.duration) continue;
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) d2 += (x[k] - site.center[k]) * (x[k] - site.center[k]);
    if (d2 <= s.radius * s.radius) return s.amplitude;
  }
  return 0.0;
}

} // namespace bidomain
