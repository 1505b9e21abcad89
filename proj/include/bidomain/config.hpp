#pragma once

#include "bidomain/bench.hpp"
#include "bidomain/simulate.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bidomain {

// Contents of a JSON run configuration. Every section is optional; omitted
// values take the defaults for the mesh dimension.
//
//   mesh      {dim, cells, coupled}
//   physics   {g_i_l, g_i_t, g_e_l, g_e_t, k_lung, k_cavity, k_other, chi, c_m}
//   ionic     {v_rest, v_peak, tau_in, tau_out, tau_open, tau_close, u_gate}
//   stimulus  {radius, amplitude, duration, sites: [{center, start}]}
//   solver    {tol, max_iter, inner}
//   sim       {dt_ms, t_end_ms, snapshot_every}
//   bench     {series, seed, dt_coarse_ms, t_end_ms, calibration_trials,
//              timing_repeats, parallel, variants}
struct AppConfig {
  SimulationConfig sim = SimulationConfig::defaults(3);
  ScalingOptions bench;
  // Inner solvers compared by the bench iteration table; empty means only
  // the solver.inner choice.
  std::vector<InnerKind> variants;
  std::uint64_t seed = 1;
};

// Throws ConfigError naming the offending key for syntax errors, unknown
// keys, wrong types and out-of-range values.
AppConfig parse_config_text(std::string_view text);
AppConfig load_config(const std::filesystem::path& path);

} // namespace bidomain
