#pragma once

#include "bidomain/mesh.hpp"

#include <vector>

namespace bidomain {

// Two-variable (Mitchell-Schaeffer type) membrane model written in mV with
// the affine map u_d = (v - v_rest) / (v_peak - v_rest). Times in ms.
struct IonicParams {
  double v_rest = -90.0;
  double v_peak = 50.0;
  double tau_in = 0.3;
  double tau_out = 6.0;
  double tau_open = 120.0;
  double tau_close = 150.0;
  double u_gate = 0.13;

  void validate() const;
  double normalized(double v) const { return (v - v_rest) / (v_peak - v_rest); }
};

// Ionic current in uA/cm^2; positive values repolarize.
//   I_ion = -c_m (v_peak - v_rest) (w u^2 (1 - u) / tau_in - u / tau_out)
double i_ion(double v, double w, const IonicParams& p, double c_m = 1.0);

// One explicit Euler step of dw/dt = (1 - w)/tau_open below the gate
// threshold and -w/tau_close above it, clamped to [0, 1].
double gate_update(double w, double v, double dt, const IonicParams& p);

struct StimulusSite {
  Point center;
  double start = 0.0;  // ms
};

struct StimulusProtocol {
  std::vector<StimulusSite> sites;
  double radius = 0.1;       // cm
  double amplitude = 100.0;  // uA/cm^2
  double duration = 1.0;     // ms

  // 3D: one site at the centre of the cube. 2D: two sites in the left half
  // of the heart block at t=0 and two in the right half 5 ms later.
  static StimulusProtocol defaults(int dim);
  void validate() const;
};

// Amplitude inside any site's closed ball during [start, start+duration),
// zero otherwise.
double stimulus(const Point& x, double t, const StimulusProtocol& protocol);

} // namespace bidomain
