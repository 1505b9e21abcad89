#include "bidomain/config.hpp"

#include "bidomain/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace bidomain {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config: '" + key + "' " + what);
}

// Object accessor that rejects keys outside the allowed set.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* a : allowed) known = known || it.key() == a;
      if (!known) fail(key(it.key()), "is not a recognized key");
    }
  }

  std::string key(const std::string& name) const {
    return path_.empty() ? name : path_ + "." + name;
  }
  const json* find(const char* name) const {
    auto it = j_.find(name);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const char* name, double& out) const {
    if (auto* v = find(name)) {
      if (!v->is_number()) fail(key(name), "must be a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key(name), "must be finite");
    }
  }
  void positive(const char* name, double& out) const {
    number(name, out);
    if (find(name) && !(out > 0.0)) fail(key(name), "must be positive");
  }
  template <class Int>
  void integer(const char* name, Int& out, long long min) const {
    if (auto* v = find(name)) {
      if (!v->is_number_integer()) fail(key(name), "must be an integer");
      auto const x = v->get<long long>();
      if (x < min) fail(key(name), "must be >= " + std::to_string(min));
      out = static_cast<Int>(x);
    }
  }
  void boolean(const char* name, bool& out) const {
    if (auto* v = find(name)) {
      if (!v->is_boolean()) fail(key(name), "must be true or false");
      out = v->get<bool>();
    }
  }
  void inner(const char* name, InnerKind& out) const {
    if (auto* v = find(name)) out = inner_of(*v, key(name));
  }

  static InnerKind inner_of(const json& v, const std::string& key) {
    if (!v.is_string()) fail(key, "must be one of \"exact\", \"ic0\", \"jacobi\"");
    try {
      return parse_inner_kind(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      fail(key, "must be one of \"exact\", \"ic0\", \"jacobi\"");
    }
  }

 private:
  const json& j_;
  std::string path_;
};

void read_physics(const Section& s, ConductivityParams& p) {
  s.positive("g_i_l", p.g_i_l);
  s.positive("g_i_t", p.g_i_t);
  s.positive("g_e_l", p.g_e_l);
  s.positive("g_e_t", p.g_e_t);
  s.positive("k_lung", p.k_lung);
  s.positive("k_cavity", p.k_cavity);
  s.positive("k_other", p.k_other);
  s.positive("chi", p.chi);
  s.positive("c_m", p.c_m);
}

void read_ionic(const Section& s, IonicParams& p) {
  s.number("v_rest", p.v_rest);
  s.number("v_peak", p.v_peak);
  s.positive("tau_in", p.tau_in);
  s.positive("tau_out", p.tau_out);
  s.positive("tau_open", p.tau_open);
  s.positive("tau_close", p.tau_close);
  s.positive("u_gate", p.u_gate);
  if (!(p.v_peak > p.v_rest)) fail(s.key("v_peak"), "must exceed v_rest");
  if (!(p.u_gate < 1.0)) fail(s.key("u_gate"), "must be below 1");
}

void read_stimulus(const Section& s, StimulusProtocol& p, int dim) {
  s.positive("radius", p.radius);
  s.number("amplitude", p.amplitude);
  s.positive("duration", p.duration);
  auto* sites = s.find("sites");
  if (!sites) return;
  if (!sites->is_array()) fail(s.key("sites"), "must be an array");
  p.sites.clear();
  for (std::size_t k = 0; k < sites->size(); ++k) {
    std::string const path = s.key("sites") + "[" + std::to_string(k) + "]";
    Section site((*sites)[k], path, {"center", "start"});
    StimulusSite out;
    auto* c = site.find("center");
    if (!c) fail(site.key("center"), "is required");
    if (!c->is_array() || c->size() != static_cast<std::size_t>(dim)) {
      fail(site.key("center"), "must be an array of " + std::to_string(dim) + " numbers");
    }
    for (int d = 0; d < dim; ++d) {
      if (!(*c)[d].is_number()) fail(site.key("center"), "must contain numbers");
      out.center[d] = (*c)[d].get<double>();
    }
    site.number("start", out.start);
    if (out.start < 0.0) fail(site.key("start"), "must be non-negative");
    p.sites.push_back(out);
  }
}

} // namespace

AppConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  Section root(doc, "", {"mesh", "physics", "ionic", "stimulus", "solver", "sim", "bench"});

  MeshSpec mesh;
  if (auto* m = root.find("mesh")) {
    Section s(*m, "mesh", {"dim", "cells", "coupled"});
    s.integer("dim", mesh.dim, 2);
    if (mesh.dim != 2 && mesh.dim != 3) fail("mesh.dim", "must be 2 or 3");
  }

  AppConfig cfg;
  cfg.sim = SimulationConfig::defaults(mesh.dim);
  auto& sim = cfg.sim;

  if (auto* m = root.find("mesh")) {
    Section s(*m, "mesh", {"dim", "cells", "coupled"});
    s.integer("cells", sim.mesh.cells, 2);
    s.boolean("coupled", sim.mesh.coupled);
    if (sim.mesh.dim == 3 && sim.mesh.coupled) fail("mesh.coupled", "is only available in 2D");
    if (sim.mesh.dim == 2 && sim.mesh.coupled && sim.mesh.cells % 4 != 0) {
      fail("mesh.cells", "must be a multiple of 4 for the coupled 2D mesh");
    }
  }
  if (auto* j = root.find("physics")) {
    read_physics(Section(*j, "physics", {"g_i_l", "g_i_t", "g_e_l", "g_e_t", "k_lung",
                                         "k_cavity", "k_other", "chi", "c_m"}),
                 sim.physics);
  }
  if (auto* j = root.find("ionic")) {
    read_ionic(Section(*j, "ionic", {"v_rest", "v_peak", "tau_in", "tau_out", "tau_open",
                                     "tau_close", "u_gate"}),
               sim.ionic);
  }
  if (auto* j = root.find("stimulus")) {
    read_stimulus(Section(*j, "stimulus", {"radius", "amplitude", "duration", "sites"}),
                  sim.stimulus, sim.mesh.dim);
  }
  if (auto* j = root.find("solver")) {
    Section s(*j, "solver", {"tol", "max_iter", "inner"});
    s.positive("tol", sim.solver.tol);
    s.integer("max_iter", sim.solver.max_iter, 1);
    s.inner("inner", sim.inner);
  }
  if (auto* j = root.find("sim")) {
    Section s(*j, "sim", {"dt_ms", "t_end_ms", "snapshot_every"});
    s.positive("dt_ms", sim.dt);
    s.number("t_end_ms", sim.t_end);
    if (sim.t_end < 0.0) fail("sim.t_end_ms", "must be non-negative");
    s.integer("snapshot_every", sim.snapshot_every, 0);
    if (sim.t_end > 0.0 && sim.t_end < sim.dt) fail("sim.t_end_ms", "must be 0 or at least dt_ms");
  }
  if (auto* j = root.find("bench")) {
    Section s(*j, "bench", {"series", "seed", "dt_coarse_ms", "t_end_ms", "calibration_trials",
                            "timing_repeats", "parallel", "variants"});
    if (auto* series = s.find("series")) {
      if (!series->is_array() || series->size() < 2) {
        fail("bench.series", "must be an array of at least two mesh sizes");
      }
      cfg.bench.series.clear();
      for (auto const& v : *series) {
        if (!v.is_number_integer() || v.get<long long>() < 2) {
          fail("bench.series", "must contain integers >= 2");
        }
        int const n = v.get<int>();
        if (!cfg.bench.series.empty() && n <= cfg.bench.series.back()) {
          fail("bench.series", "must be strictly increasing");
        }
        cfg.bench.series.push_back(n);
      }
    }
    s.integer("seed", cfg.seed, 0);
    s.positive("dt_coarse_ms", cfg.bench.dt_coarse);
    s.positive("t_end_ms", cfg.bench.t_end);
    s.integer("calibration_trials", cfg.bench.calibration_trials, 10);
    s.integer("timing_repeats", cfg.bench.timing_repeats, 1);
    s.boolean("parallel", cfg.bench.parallel);
    if (auto* v = s.find("variants")) {
      if (!v->is_array() || v->empty()) fail("bench.variants", "must be a non-empty array");
      for (std::size_t k = 0; k < v->size(); ++k) {
        cfg.variants.push_back(
            Section::inner_of((*v)[k], "bench.variants[" + std::to_string(k) + "]"));
      }
    }
  }
  cfg.bench.seed = cfg.seed;

  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

} // namespace bidomain
