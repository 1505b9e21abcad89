#pragma once

#include "bidomain/conductivity.hpp"
#include "bidomain/inner.hpp"
#include "bidomain/ionic.hpp"
#include "bidomain/krylov.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/precond.hpp"
#include "bidomain/system.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <vector>

namespace bidomain {

struct MeshSpec {
  int dim = 3;
  int cells = 8;
  // 2D only: heart embedded in a heterogeneous torso instead of an isolated
  // heart square.
  bool coupled = false;
};

Mesh build_mesh(const MeshSpec& spec);

struct SimulationConfig {
  MeshSpec mesh;
  ConductivityParams physics = ConductivityParams::defaults(3);
  IonicParams ionic;
  StimulusProtocol stimulus = StimulusProtocol::defaults(3);
  InnerKind inner = InnerKind::exact;
  PcgOptions solver;
  double dt = 0.2;       // ms
  double t_end = 10.0;   // ms
  int snapshot_every = 0;  // steps between snapshots, 0 disables

  static SimulationConfig defaults(int dim);
  void validate() const;
};

inline constexpr double activation_threshold_mv = -20.0;
inline constexpr double not_activated = std::numeric_limits<double>::infinity();

// First time (ms) each heart vertex reached the threshold, or not_activated.
struct ActivationMap {
  std::vector<double> phi;

  std::size_t activated_count() const;
  bool all_activated() const { return activated_count() == phi.size(); }
};

// Running threshold-crossing detection; keeps no history.
class ActivationTracker {
 public:
  explicit ActivationTracker(std::size_t n, double threshold = activation_threshold_mv);

  void initialize(double t0, std::span<const double> v0);

  // Linear interpolation between the bracketing samples.
  void observe(double t_prev, std::span<const double> v_prev, double t,
               std::span<const double> v);

  const ActivationMap& map() const { return map_; }
  bool all_activated() const { return remaining_ == 0; }

 private:
  double threshold_;
  ActivationMap map_;
  std::size_t remaining_;
};

// Activation times from a sampled history v_history[k] at times[k].
ActivationMap activation_times(std::span<const double> times,
                               const std::vector<std::vector<double>>& v_history,
                               double threshold = activation_threshold_mv);

struct SimulationState {
  std::size_t step = 0;
  double t = 0.0;
  BlockVector x;            // (u on the domain, v on the heart)
  std::vector<double> w;    // gate on the heart
};

struct StepReport {
  std::size_t step = 0;   // index of the completed step (1-based)
  double t = 0.0;         // time after the step
  SolveStats solve;
  bool in_window = false; // part of the depolarization window
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

struct SimulationStats {
  std::size_t steps = 0;
  std::size_t window_steps = 0;
  std::size_t total_iterations = 0;
  std::size_t window_iterations = 0;
  double total_solve_ms = 0.0;
  double window_solve_ms = 0.0;
  std::size_t mv_count = 0;
  std::size_t p1_count = 0;
  std::size_t pk_count = 0;
  // Window solve with the most iterations (first one on ties).
  SolveStats worst_window_solve;

  double iter_avg() const;
  double cpu_avg_s() const;
};

struct SimulationResult {
  ActivationMap activation;
  SimulationStats stats;
  std::vector<Snapshot> snapshots;
};

// Semi-implicit time loop: each step builds the right hand side from the
// explicit reaction, solves the coupled system with PCG and updates the
// gate. Owns the assembled system and the preconditioner.
class Simulator {
 public:
  using Observer = std::function<void(const StepReport&, const SimulationState&)>;

  Simulator(SimulationConfig config, Mesh mesh);

  const SimulationConfig& config() const { return config_; }
  const Mesh& mesh() const { return mesh_; }
  const BidomainSystem& system() const { return *system_; }
  const SparseMatrix& km() const { return km_; }
  const BlockLUPreconditioner& preconditioner() const { return *precond_; }
  const SimulationState& state() const { return state_; }
  const ActivationMap& activation() const { return tracker_.map(); }

  std::size_t total_steps() const;

  // Advances one time step; solver failures are rethrown with the step and
  // time in the message.
  StepReport step();

  // Runs from the current state to t_end.
  SimulationResult run(const Observer& observer = {});

 private:
  SimulationConfig config_;
  Mesh mesh_;
  std::unique_ptr<BidomainSystem> system_;
  SparseMatrix km_;
  std::unique_ptr<BlockLUPreconditioner> precond_;
  SimulationState state_;
  ActivationTracker tracker_;
};

SimulationResult run_simulation(const SimulationConfig& config);
SimulationResult run_simulation(const SimulationConfig& config, Mesh mesh);

// CSV "vertex_id,x,y,z,phi_ms" over heart vertices; not activated is "inf".
void write_activation_csv(std::ostream& os, const Mesh& mesh, const ActivationMap& map);

} // namespace bidomain
