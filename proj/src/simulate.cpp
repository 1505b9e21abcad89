#include "bidomain/simulate.hpp"

#include "bidomain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bidomain {

Mesh build_mesh(const MeshSpec& spec) {
  if (spec.dim == 3) {
    if (spec.coupled) {
      throw std::invalid_argument("mesh: the 3D cube is an isolated heart (coupled=false)");
    }
    return build_cube_mesh(spec.cells);
  }
  if (spec.dim == 2) {
    return spec.coupled ? build_heart_torso_2d(spec.cells) : build_square_mesh(spec.cells);
  }
  throw std::invalid_argument("mesh: dim must be 2 or 3");
}

SimulationConfig SimulationConfig::defaults(int dim) {
  SimulationConfig c;
  c.mesh.dim = dim;
  c.physics = ConductivityParams::defaults(dim);
  c.stimulus = StimulusProtocol::defaults(dim);
  if (dim == 2) {
    c.mesh.cells = 16;
    c.mesh.coupled = true;
    c.dt = 0.05;
  }
  return c;
}

void SimulationConfig::validate() const {
  physics.validate();
  ionic.validate();
  stimulus.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("sim: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("sim: t_end must be non-negative");
  }
  if (t_end > 0.0 && t_end < dt) throw std::invalid_argument("sim: t_end must be >= dt");
  if (snapshot_every < 0) throw std::invalid_argument("sim: snapshot_every must be >= 0");
  if (!(solver.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (solver.max_iter < 1) throw std::invalid_argument("solver: max_iter must be positive");
}

// --- activation --------------------------------------------------------------

std::size_t ActivationMap::activated_count() const {
  return static_cast<std::size_t>(
      std::count_if(phi.begin(), phi.end(), [](double x) { return std::isfinite(x); }));
}

ActivationTracker::ActivationTracker(std::size_t n, double threshold)
    : threshold_(threshold), map_{std::vector<double>(n, not_activated)}, remaining_(n) {}

void ActivationTracker::initialize(double t0, std::span<const double> v0) {
  if (v0.size() != map_.phi.size()) throw std::invalid_argument("activation: size mismatch");
  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (!std::isfinite(map_.phi[i]) && v0[i] >= threshold_) {
      map_.phi[i] = t0;
      --remaining_;
    }
  }
}

void ActivationTracker::observe(double t_prev, std::span<const double> v_prev, double t,
                                std::span<const double> v) {
  if (v_prev.size() != map_.phi.size() || v.size() != map_.phi.size()) {
    throw std::invalid_argument("activation: size mismatch");
  }
  if (remaining_ == 0) return;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isfinite(map_.phi[i]) || v[i] < threshold_) continue;
    double phi = t;
    if (v_prev[i] < threshold_) {
      phi = t_prev + (t - t_prev) * (threshold_ - v_prev[i]) / (v[i] - v_prev[i]);
    }
    map_.phi[i] = phi;
    --remaining_;
  }
}

ActivationMap activation_times(std::span<const double> times,
                               const std::vector<std::vector<double>>& v_history,
                               double threshold) {
  if (times.size() != v_history.size()) {
    throw std::invalid_argument("activation_times: one sample per time is required");
  }
  if (times.empty()) return {};
  ActivationTracker tr(v_history.front().size(), threshold);
  tr.initialize(times[0], v_history[0]);
  for (std::size_t k = 1; k < times.size(); ++k) {
    tr.observe(times[k - 1], v_history[k - 1], times[k], v_history[k]);
  }
  return tr.map();
}

// --- stats ---------------------------------------------------------------------

double SimulationStats::iter_avg() const {
  return window_steps == 0 ? 0.0
                           : static_cast<double>(window_iterations) /
                                 static_cast<double>(window_steps);
}

double SimulationStats::cpu_avg_s() const {
  return window_steps == 0 ? 0.0 : window_solve_ms / 1000.0 / static_cast<double>(window_steps);
}

// --- simulator -------------------------------------------------------------------

namespace {

// Upstroke band used to detect the depolarization window.
constexpr double window_low_mv = -80.0;
constexpr double window_high_mv = 40.0;

} // namespace

Simulator::Simulator(SimulationConfig config, Mesh mesh)
    : config_(std::move(config)), mesh_(std::move(mesh)),
      tracker_(mesh_.heart_vertex_count()) {
  config_.validate();
  double const g = gamma(config_.physics.chi, config_.physics.c_m, config_.dt);
  system_ = std::make_unique<BidomainSystem>(BidomainSystem::assemble(mesh_, config_.physics, g));
  km_ = build_Km(mesh_, config_.physics, g);
  precond_ = BlockLUPreconditioner::build(*system_, km_, config_.inner);

  auto const nh = mesh_.heart_vertex_count();
  state_.x = BlockVector::zeros(mesh_.vertex_count(), nh);
  std::fill(state_.x.v.begin(), state_.x.v.end(), config_.ionic.v_rest);
  state_.w.assign(nh, 1.0);
  tracker_.initialize(0.0, state_.x.v);
}

std::size_t Simulator::total_steps() const {
  return static_cast<std::size_t>(std::floor(config_.t_end / config_.dt + 1e-9));
}

StepReport Simulator::step() {
  auto const nh = mesh_.heart_vertex_count();
  auto const& cfg = config_;
  double const t_n = state_.t;
  auto const& v_n = state_.x.v;

  std::vector<double> ion(nh), stim(nh);
  for (std::size_t i = 0; i < nh; ++i) {
    ion[i] = i_ion(v_n[i], state_.w[i], cfg.ionic, cfg.physics.c_m);
    stim[i] = stimulus(mesh_.vertices()[i], t_n, cfg.stimulus);
  }
  auto const rhs = build_rhs(*system_, v_n, ion, stim, cfg.physics.chi);

  StepReport report;
  report.step = state_.step + 1;
  report.t = static_cast<double>(report.step) * cfg.dt;
  auto const context = [&] {
    return " (time step " + std::to_string(report.step) + ", t=" + std::to_string(t_n) + " ms)";
  };

  PcgResult solved;
  try {
    solved = pcg_solve(*system_, *precond_, rhs, cfg.solver);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(e.what() + context(), e.stats());
  } catch (const NumericalError& e) {
    throw NumericalError(e.what() + context());
  }

  for (std::size_t i = 0; i < nh; ++i) {
    state_.w[i] = gate_update(state_.w[i], v_n[i], cfg.dt, cfg.ionic);
  }

  bool const was_all_activated = tracker_.all_activated();
  tracker_.observe(t_n, v_n, report.t, solved.x.v);
  report.in_window =
      !was_all_activated &&
      std::any_of(solved.x.v.begin(), solved.x.v.end(),
                  [](double v) { return v >= window_low_mv && v <= window_high_mv; });

  state_.x = std::move(solved.x);
  state_.t = report.t;
  state_.step = report.step;
  report.solve = std::move(solved.stats);
  return report;
}

SimulationResult Simulator::run(const Observer& observer) {
  SimulationResult result;
  auto& st = result.stats;
  auto const n_steps = total_steps();
  auto const every = static_cast<std::size_t>(config_.snapshot_every);

  auto snapshot = [&] {
    result.snapshots.push_back({state_.t, state_.x.u, state_.x.v});
  };
  if (every > 0 && n_steps > 0 && state_.step % every == 0) snapshot();

  while (state_.step < n_steps) {
    auto report = step();
    ++st.steps;
    st.total_iterations += static_cast<std::size_t>(report.solve.iterations);
    st.total_solve_ms += report.solve.wall_time_ms;
    st.mv_count += report.solve.mv_count;
    st.p1_count += report.solve.p1_count;
    st.pk_count += report.solve.pk_count;
    if (report.in_window) {
      if (st.window_steps == 0 ||
          report.solve.iterations > st.worst_window_solve.iterations) {
        st.worst_window_solve = report.solve;
      }
      ++st.window_steps;
      st.window_iterations += static_cast<std::size_t>(report.solve.iterations);
      st.window_solve_ms += report.solve.wall_time_ms;
    }
    if (every > 0 && state_.step % every == 0) snapshot();
    if (observer) observer(report, state_);
  }
  result.activation = tracker_.map();
  return result;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  return run_simulation(config, build_mesh(config.mesh));
}

SimulationResult run_simulation(const SimulationConfig& config, Mesh mesh) {
  Simulator sim(config, std::move(mesh));
  return sim.run();
}

void write_activation_csv(std::ostream& os, const Mesh& mesh, const ActivationMap& map) {
  os << "vertex_id,x,y,z,phi_ms\n" << std::setprecision(17);
  for (std::size_t i = 0; i < map.phi.size(); ++i) {
    auto const& p = mesh.vertices()[i];
    os << i << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',';
    if (std::isfinite(map.phi[i])) {
      os << map.phi[i];
    } else {
      os << "inf";
    }
    os << '\n';
  }
}

} // namespace bidomain
