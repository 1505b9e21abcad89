#include "bidomain/simulate.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace bidomain;

namespace {

SimulationConfig small_3d(int cells, double dt, double t_end) {
  auto c = SimulationConfig::defaults(3);
  c.mesh.cells = cells;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

} // namespace

TEST_CASE("config validation") {
  auto c = SimulationConfig::defaults(2);
  CHECK(c.mesh.dim == 2);
  CHECK(c.mesh.coupled);
  CHECK(c.physics.chi == 1500.0);
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.dt = 0.1;
  c.t_end = 0.05;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.t_end = 0.0;
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(build_mesh({3, 4, true}), std::invalid_argument);
}

TEST_CASE("activation tracking") {
  ActivationTracker tr(3);
  std::vector<double> v0{50.0, -30.0, -90.0};
  tr.initialize(0.0, v0);
  CHECK(tr.map().phi[0] == 0.0);
  tr.observe(0.0, v0, 1.0, std::vector<double>{50.0, -30.0, -90.0});
  tr.observe(1.0, std::vector<double>{50.0, -30.0, -90.0}, 2.0,
             std::vector<double>{50.0, -10.0, -90.0});
  CHECK(tr.map().phi[1] == doctest::Approx(1.5));
  CHECK(tr.map().phi[2] == not_activated);
  CHECK(tr.map().activated_count() == 2);
  CHECK_FALSE(tr.all_activated());

  std::vector<double> times{0.0, 1.0, 2.0};
  auto m = activation_times(times, {{-90.0, 50.0}, {-30.0, 50.0}, {-10.0, 50.0}});
  CHECK(m.phi[0] == doctest::Approx(1.5));
  CHECK(m.phi[1] == 0.0);
}

TEST_CASE("resting state is an equilibrium") {
  auto c = small_3d(3, 0.2, 1.0);
  c.stimulus.sites.clear();
  Simulator sim(c, build_mesh(c.mesh));
  for (int k = 0; k < 3; ++k) {
    auto rep = sim.step();
    CHECK(rep.solve.iterations <= 1);
    CHECK_FALSE(rep.in_window);
  }
  for (double v : sim.state().x.v) CHECK(std::abs(v + 90.0) <= 1e-10);
  for (double w : sim.state().w) CHECK(std::abs(w - 1.0) <= 1e-10);
  for (double u : sim.state().x.u) CHECK(std::abs(u) <= 1e-10);
}

TEST_CASE("stimulated steps raise the peak potential") {
  auto c = small_3d(4, 0.1, 1.0);
  Simulator sim(c, build_mesh(c.mesh));
  double prev = -90.0;
  std::size_t mv = 0;
  while (sim.state().step < sim.total_steps()) {
    auto rep = sim.step();
    double peak = -1e300;
    for (double v : sim.state().x.v) peak = std::max(peak, v);
    CHECK(peak > prev);
    prev = peak;
    CHECK(rep.solve.mv_count == static_cast<std::size_t>(rep.solve.iterations) + 1);
    mv += rep.solve.mv_count;
  }
  CHECK(sim.total_steps() == 10);
  CHECK(mv > 10);
}

TEST_CASE("snapshot cadence and empty runs") {
  auto c = small_3d(3, 0.2, 2.0);
  c.snapshot_every = 3;
  auto r = run_simulation(c);
  // floor(t_end / (k dt)) + 1
  CHECK(r.snapshots.size() == 4);
  CHECK(r.stats.steps == 10);
  CHECK(r.snapshots.front().t == 0.0);

  c.t_end = 0.0;
  auto e = run_simulation(c);
  CHECK(e.stats.steps == 0);
  CHECK(e.snapshots.empty());
  CHECK(e.activation.activated_count() == 0);
}

TEST_CASE("no activation before the stimulus") {
  auto c = SimulationConfig::defaults(2);
  c.mesh.cells = 8;
  for (auto& s : c.stimulus.sites) s.start = 10.0;
  c.t_end = 2.0;
  auto r = run_simulation(c);
  CHECK(r.activation.activated_count() == 0);
  for (double phi : r.activation.phi) CHECK(phi == not_activated);
}

TEST_CASE("activation spreads outward and runs are deterministic") {
  auto c = small_3d(8, 0.2, 60.0);
  auto mesh = build_mesh(c.mesh);
  auto r = run_simulation(c, mesh);
  CHECK(r.activation.all_activated());
  auto find = [&](Point p) {
    for (std::size_t i = 0; i < mesh.heart_vertex_count(); ++i) {
      if (mesh.vertices()[i] == p) return r.activation.phi[i];
    }
    FAIL("vertex not found");
    return 0.0;
  };
  CHECK(find({0.5, 0.5, 0.5}) < find({0.0, 0.0, 0.0}));
  CHECK(find({0.5, 0.5, 0.5}) < find({1.0, 1.0, 1.0}));
  CHECK(find({0.75, 0.5, 0.5}) < find({0.5, 0.75, 0.5}));
  CHECK(r.stats.window_steps > 0);
  CHECK(r.stats.window_steps < r.stats.steps);
  CHECK(r.stats.iter_avg() >= 1.0);

  auto again = run_simulation(c, mesh);
  CHECK(again.activation.phi == r.activation.phi);
}

TEST_CASE("activation csv") {
  auto mesh = build_cube_mesh(2);
  ActivationMap m;
  m.phi.assign(mesh.heart_vertex_count(), not_activated);
  m.phi[0] = 1.25;
  std::ostringstream os;
  write_activation_csv(os, mesh, m);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "vertex_id,x,y,z,phi_ms");
  std::getline(is, line);
  CHECK(line == "0,0,0,0,1.25");
  std::getline(is, line);
  CHECK(line.substr(line.size() - 4) == ",inf");
}
