#pragma once

#include "bidomain/krylov.hpp"
#include "bidomain/precond.hpp"
#include "bidomain/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bidomain {

// log(cost_cur / cost_prev) / log(dof_cur / dof_prev)
double growth_rate(double cost_prev, double cost_cur, double dof_prev, double dof_cur);

// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct BenchRecord {
  int n = 0;            // 1-based series index
  int cells = 0;
  std::size_t dof = 0;  // N + N_H
  double dt = 0.0;
  double iter_avg = 0.0;
  double cpu_avg_s = 0.0;
  double r_iter = 0.0;  // growth rate of DOF x Iter (NaN for n = 1)
  double r_cpu = 0.0;   // growth rate of CPU (NaN for n = 1)
  double mv_equivalent = 0.0;
  std::size_t window_solves = 0;
  SolveStats worst_solve;
};

struct ScalingOptions {
  std::vector<int> series{8, 16, 32};
  double dt_coarse = 0.2;  // ms, halved with every halving of the mesh size
  double t_end = 10.0;     // ms of simulated time per mesh
  int calibration_trials = 10;
  // Simulations per size; cpu_avg_s is the median over them. Iteration
  // counts are deterministic and taken from the first run.
  int timing_repeats = 3;
  std::uint64_t seed = 1;
  bool parallel = false;   // run the series entries concurrently

  void validate() const;
};

struct ScalingResult {
  std::vector<BenchRecord> records;
  double slope_iter_dof = 0.0;  // log(DOF x Iter) vs log(DOF)
  double slope_cpu = 0.0;       // log(CPU) vs log(DOF)
  // Set when a simulation failed; records before it are kept.
  std::optional<std::string> failure;
};

// 3D cube series: for each size build the mesh, simulate [0, t_end] with the
// base physics and solver settings, and average iterations and solve time
// over the depolarization window.
ScalingResult run_scaling_study(const ScalingOptions& options, const SimulationConfig& base);

// Median time of a preconditioner application over the median time of a
// system-matrix product, on seeded random vectors. trials >= 10.
double calibrate_costs(const BidomainSystem& sys, const BlockLUPreconditioner& precond,
                       int trials, std::uint64_t seed = 1);

// n,dof,iter_avg,cpu_avg_s,r_iter,r_cpu
void write_scaling_csv(std::ostream& os, std::span<const BenchRecord> records);
// dof,mv_equiv
void write_calibration_csv(std::ostream& os, std::span<const BenchRecord> records);
// n,dof,iter_<variant>... ; all variants must share the series.
void write_iteration_table(std::ostream& os, std::span<const std::string> variants,
                           std::span<const std::vector<BenchRecord>> records);

} // namespace bidomain
