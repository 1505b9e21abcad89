#include "bidomain/config.hpp"
#include "bidomain/errors.hpp"
#include "bidomain/mesh_io.hpp"
#include "bidomain/system.hpp"

#include <doctest.h>

#include <sstream>

using namespace bidomain;

namespace {

Mesh round_trip(const Mesh& m) {
  std::stringstream ss;
  write_mesh_vtk(ss, m);
  return read_mesh_vtk(ss);
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("VTK mesh round trip is exact") {
  for (auto const& m : {build_heart_torso_2d(8), build_cube_mesh(3), build_square_mesh(4)}) {
    auto r = round_trip(m);
    CHECK(r.dim() == m.dim());
    CHECK(r.vertex_count() == m.vertex_count());
    CHECK(r.heart_vertex_count() == m.heart_vertex_count());
    REQUIRE(r.element_count() == m.element_count());
    for (std::size_t i = 0; i < m.vertex_count(); ++i) CHECK(r.vertices()[i] == m.vertices()[i]);
    for (std::size_t e = 0; e < m.element_count(); ++e) {
      CHECK(r.regions()[e] == m.regions()[e]);
      auto a = m.element(e), b = r.element(e);
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
    auto p = ConductivityParams::defaults(m.dim());
    auto s1 = BidomainSystem::assemble(m, p, 100.0);
    auto s2 = BidomainSystem::assemble(r, p, 100.0);
    CHECK(s1.s1().fingerprint() == s2.s1().fingerprint());
    CHECK(s1.si().fingerprint() == s2.si().fingerprint());
  }
}

TEST_CASE("VTK reader rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_mesh_vtk(empty), std::invalid_argument);
  std::stringstream ss;
  write_mesh_vtk(ss, build_cube_mesh(2));
  auto text = ss.str();
  std::istringstream cut(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_mesh_vtk(cut), std::invalid_argument);
}

TEST_CASE("snapshot VTK") {
  auto m = build_heart_torso_2d(4);
  std::vector<double> u(m.vertex_count(), 1.5), v(m.heart_vertex_count(), -90.0);
  std::ostringstream os;
  write_snapshot_vtk(os, m, u, v, 2.5);
  auto s = os.str();
  CHECK(s.find("POINT_DATA 25") != std::string::npos);
  CHECK(s.find("SCALARS u double 1") != std::string::npos);
  CHECK(s.find("SCALARS v double 1") != std::string::npos);
  CHECK_THROWS_AS(write_snapshot_vtk(os, m, v, v, 0.0), std::invalid_argument);
}

TEST_CASE("config defaults follow the dimension") {
  auto c3 = parse_config_text("{}");
  CHECK(c3.sim.mesh.dim == 3);
  CHECK(c3.sim.physics.chi == 500.0);
  CHECK(c3.sim.solver.tol == 1e-6);
  CHECK(c3.sim.inner == InnerKind::exact);
  auto c2 = parse_config_text(R"({"mesh": {"dim": 2}})");
  CHECK(c2.sim.physics.chi == 1500.0);
  CHECK(c2.sim.mesh.coupled);
  CHECK(c2.sim.stimulus.sites.size() == 4);
}

TEST_CASE("config overrides") {
  auto c = parse_config_text(R"({
    "mesh": {"dim": 3, "cells": 5},
    "physics": {"g_e_l": 3.482, "chi": 1000},
    "ionic": {"tau_out": 5.5},
    "stimulus": {"radius": 0.2, "sites": [{"center": [0.1, 0.2, 0.3], "start": 2}]},
    "solver": {"tol": 1e-8, "max_iter": 50, "inner": "ic0"},
    "sim": {"dt_ms": 0.1, "t_end_ms": 5, "snapshot_every": 10},
    "bench": {"series": [4, 8], "seed": 42, "variants": ["exact", "jacobi"]}
  })");
  CHECK(c.sim.mesh.cells == 5);
  CHECK(c.sim.physics.g_e_l == 3.482);
  CHECK(c.sim.physics.chi == 1000.0);
  CHECK(c.sim.ionic.tau_out == 5.5);
  CHECK(c.sim.stimulus.radius == 0.2);
  REQUIRE(c.sim.stimulus.sites.size() == 1);
  CHECK(c.sim.stimulus.sites[0].center == Point{0.1, 0.2, 0.3});
  CHECK(c.sim.stimulus.sites[0].start == 2.0);
  CHECK(c.sim.solver.tol == 1e-8);
  CHECK(c.sim.solver.max_iter == 50);
  CHECK(c.sim.inner == InnerKind::ic0);
  CHECK(c.sim.dt == 0.1);
  CHECK(c.sim.t_end == 5.0);
  CHECK(c.sim.snapshot_every == 10);
  CHECK(c.bench.series == std::vector<int>{4, 8});
  CHECK(c.seed == 42);
  CHECK(c.bench.seed == 42);
  CHECK(c.variants == std::vector<InnerKind>{InnerKind::exact, InnerKind::jacobi});
}

TEST_CASE("config errors name the key") {
  CHECK(config_error(R"({"mesh": {"cels": 4}})").find("mesh.cels") != std::string::npos);
  CHECK(config_error(R"({"foo": 1})").find("'foo'") != std::string::npos);
  CHECK(config_error(R"({"physics": {"chi": -1}})").find("physics.chi") != std::string::npos);
  CHECK(config_error(R"({"solver": {"inner": "amg"}})").find("solver.inner") != std::string::npos);
  CHECK(config_error(R"({"solver": {"max_iter": 1.5}})").find("solver.max_iter") != std::string::npos);
  CHECK(config_error(R"({"sim": {"dt_ms": "x"}})").find("sim.dt_ms") != std::string::npos);
  CHECK(config_error(R"({"mesh": {"dim": 4}})").find("mesh.dim") != std::string::npos);
  CHECK(config_error(R"({"mesh": {"dim": 3, "coupled": true}})").find("mesh.coupled") != std::string::npos);
  CHECK(config_error(R"({"bench": {"series": [8, 4]}})").find("bench.series") != std::string::npos);
  CHECK(config_error(R"({"stimulus": {"sites": [{"center": [0.5, 0.5]}]}})").find("center") != std::string::npos);
  CHECK(config_error(R"({"ionic": {"v_peak": -100}})").find("ionic.v_peak") != std::string::npos);
  CHECK(config_error("{\"mesh\": ").find("malformed") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
