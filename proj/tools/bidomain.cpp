#include "bidomain/bench.hpp"
#include "bidomain/config.hpp"
#include "bidomain/errors.hpp"
#include "bidomain/mesh_io.hpp"
#include "bidomain/oracle.hpp"
#include "bidomain/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace bidomain;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out;
  std::string mesh_file;
  std::string inner;
  std::optional<std::uint64_t> seed;
};

AppConfig load(const Options& o) {
  AppConfig cfg = o.config.empty() ? parse_config_text("{}") : load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.bench.seed = *o.seed;
  }
  if (!o.inner.empty()) {
    try {
      cfg.sim.inner = parse_inner_kind(o.inner);
    } catch (const std::invalid_argument&) {
      throw UsageError("--inner must be one of exact, ic0, jacobi");
    }
    cfg.variants = {cfg.sim.inner};
  }
  return cfg;
}

Mesh mesh_for(const Options& o, const AppConfig& cfg) {
  if (o.mesh_file.empty()) return build_mesh(cfg.sim.mesh);
  std::ifstream in(o.mesh_file);
  if (!in) throw UsageError("cannot read mesh file '" + o.mesh_file + "'");
  Mesh mesh = read_mesh_vtk(in);
  if (mesh.dim() != cfg.sim.mesh.dim) {
    throw UsageError("mesh file is " + std::to_string(mesh.dim()) + "D but the config is " +
                     std::to_string(cfg.sim.mesh.dim) + "D");
  }
  return mesh;
}

fs::path out_dir(const Options& o) {
  fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write '" + p.string() + "'");
  return f;
}

std::string hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void print_fingerprints(const BidomainSystem& sys, const SparseMatrix& km) {
  std::cout << "fingerprint S1 " << hex(sys.s1().fingerprint()) << '\n'
            << "fingerprint Si " << hex(sys.si().fingerprint()) << '\n'
            << "fingerprint Se " << hex(sys.se().fingerprint()) << '\n'
            << "fingerprint M " << hex(sys.mass().fingerprint()) << '\n'
            << "fingerprint MH " << hex(sys.heart_mass().fingerprint()) << '\n'
            << "fingerprint Km " << hex(km.fingerprint()) << '\n';
}

void print_mesh(const Mesh& m) {
  std::cout << "mesh dim=" << m.dim() << " vertices=" << m.vertex_count()
            << " heart_vertices=" << m.heart_vertex_count() << " elements=" << m.element_count()
            << '\n';
}

int cmd_mesh(const Options& o) {
  auto const cfg = load(o);
  if (o.out.empty()) throw UsageError("mesh: --out PATH is required");
  Mesh const m = mesh_for(o, cfg);
  auto f = open_out(o.out);
  write_mesh_vtk(f, m);
  print_mesh(m);
  return 0;
}

// One time step from rest: the first linear solve of a simulation.
int cmd_solve(const Options& o) {
  auto cfg = load(o);
  cfg.sim.t_end = cfg.sim.dt;
  Simulator sim(cfg.sim, mesh_for(o, cfg));
  print_mesh(sim.mesh());
  print_fingerprints(sim.system(), sim.km());
  auto const rep = sim.step();
  std::cout << std::setprecision(6) << "inner " << inner_kind_name(cfg.sim.inner) << '\n'
            << "iterations " << rep.solve.iterations << '\n'
            << "rel_residual " << rep.solve.final_residual() << '\n'
            << "mv_count " << rep.solve.mv_count << '\n'
            << "wall_ms " << rep.solve.wall_time_ms << '\n';
  if (!o.out.empty()) {
    auto const dir = out_dir(o);
    auto f = open_out(dir / "residuals.csv");
    write_residual_csv(f, rep.solve);
    auto const& sys = sim.system();
    std::pair<const char*, const SparseMatrix*> const mats[] = {
        {"S1.mtx", &sys.s1()}, {"Si.mtx", &sys.si()},         {"Se.mtx", &sys.se()},
        {"M.mtx", &sys.mass()}, {"MH.mtx", &sys.heart_mass()}, {"Km.mtx", &sim.km()}};
    for (auto const& [name, a] : mats) {
      auto mf = open_out(dir / name);
      write_matrix_market(mf, *a);
    }
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  auto const cfg = load(o);
  auto const dir = out_dir(o);
  Simulator sim(cfg.sim, mesh_for(o, cfg));
  print_mesh(sim.mesh());
  print_fingerprints(sim.system(), sim.km());

  auto const res = sim.run();
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.vtk", k);
    auto f = open_out(dir / name);
    auto const& s = res.snapshots[k];
    write_snapshot_vtk(f, sim.mesh(), s.u, s.v, s.t);
  }
  {
    auto f = open_out(dir / "activation.csv");
    if (res.stats.steps > 0) write_activation_csv(f, sim.mesh(), res.activation);
    else f << "vertex_id,x,y,z,phi_ms\n";
  }
  auto const& st = res.stats;
  std::cout << std::setprecision(6) << "steps " << st.steps << '\n'
            << "window_steps " << st.window_steps << '\n'
            << "iter_avg " << st.iter_avg() << '\n'
            << "cpu_avg_s " << st.cpu_avg_s() << '\n'
            << "activated " << res.activation.activated_count() << '/'
            << res.activation.phi.size() << '\n'
            << "snapshots " << res.snapshots.size() << '\n';
  return 0;
}

int cmd_bench(const Options& o) {
  auto const cfg = load(o);
  if (cfg.sim.mesh.dim != 3) throw UsageError("bench: the scaling study runs on 3D cubes (mesh.dim = 3)");
  auto const dir = out_dir(o);
  auto variants = cfg.variants;
  if (variants.empty()) variants.push_back(cfg.sim.inner);

  std::vector<std::string> names;
  std::vector<std::vector<BenchRecord>> tables;
  std::optional<std::string> failure;
  for (std::size_t k = 0; k < variants.size(); ++k) {
    auto base = cfg.sim;
    base.inner = variants[k];
    auto const res = run_scaling_study(cfg.bench, base);
    std::string const name(inner_kind_name(variants[k]));
    std::cout << "variant " << name << '\n';
    for (auto const& r : res.records) {
      std::cout << std::setprecision(6) << "  n=" << r.n << " cells=" << r.cells
                << " dof=" << r.dof << " iter_avg=" << r.iter_avg
                << " cpu_avg_s=" << r.cpu_avg_s << " r_iter=" << r.r_iter
                << " r_cpu=" << r.r_cpu << " mv_equiv=" << r.mv_equivalent << '\n';
    }
    std::cout << "  slope_iter_dof=" << res.slope_iter_dof << " slope_cpu=" << res.slope_cpu
              << '\n';
    if (k == 0) {
      auto f = open_out(dir / "scaling.csv");
      write_scaling_csv(f, res.records);
      auto c = open_out(dir / "calibration.csv");
      write_calibration_csv(c, res.records);
      for (auto const& r : res.records) {
        auto rf = open_out(dir / ("residuals_" + std::to_string(r.n) + ".csv"));
        write_residual_csv(rf, r.worst_solve);
      }
    }
    if (res.failure) {
      failure = name + ": " + *res.failure;
      break;
    }
    names.push_back(name);
    tables.push_back(res.records);
  }
  if (!tables.empty()) {
    auto f = open_out(dir / "iterations.csv");
    write_iteration_table(f, names, tables);
  }
  if (failure) throw NumericalError("bench: " + *failure);
  return 0;
}

int cmd_verify(const Options& o) {
  auto const cfg = load(o);
  Mesh const mesh = mesh_for(o, cfg);
  double const g = gamma(cfg.sim.physics.chi, cfg.sim.physics.c_m, cfg.sim.dt);
  auto const sys = BidomainSystem::assemble(mesh, cfg.sim.physics, g);
  print_mesh(mesh);

  bool ok = true;
  auto report = [&](const char* name, bool pass, double value, double tol) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << std::setprecision(3)
              << std::scientific << " value=" << value << " tol=" << tol << std::defaultfloat
              << '\n';
    ok = ok && pass;
  };
  auto const spsd = oracle::check_spsd(sys, cfg.seed, 100);
  report("semidefinite", spsd.min_quadratic >= -1e-12, spsd.min_quadratic, -1e-12);
  report("kernel", spsd.kernel_residual <= 1e-13, spsd.kernel_residual, 1e-13);
  report("null_space_dim", spsd.null_dim == 1, spsd.null_dim, 1);
  double const lu = oracle::verify_block_lu(sys);
  report("block_lu", lu <= 1e-10, lu, 1e-10);
  double const hm = oracle::verify_harmonic_mean(sys, cfg.seed, 50);
  report("harmonic_mean", hm <= 1e-9, hm, 1e-9);
  double const inv = oracle::verify_lu_inverses(sys, cfg.seed, 20);
  report("lu_inverses", inv <= 1e-9, inv, 1e-9);
  return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bidomain heart-torso solver with a block-LU preconditioner"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool mesh_file) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Seed for random test vectors");
    sub->add_option("--inner", o.inner, "Inner solver: exact, ic0 or jacobi");
    if (mesh_file) {
      sub->add_option("--mesh-file", o.mesh_file, "Read the mesh from a VTK file")
          ->check(CLI::ExistingFile);
    }
  };
  auto* mesh = app.add_subcommand("mesh", "Write the configured mesh as legacy VTK");
  common(mesh, false);
  mesh->add_option("--out", o.out, "Output VTK path")->required();
  auto* solve = app.add_subcommand("solve", "Assemble and run one linear solve");
  common(solve, true);
  solve->add_option("--out", o.out, "Directory for residuals and MatrixMarket files");
  auto* simulate = app.add_subcommand("simulate", "Run the time loop");
  common(simulate, true);
  simulate->add_option("--out", o.out, "Output directory");
  auto* bench = app.add_subcommand("bench", "Run the mesh-refinement scaling study");
  common(bench, false);
  bench->add_option("--out", o.out, "Output directory");
  auto* verify = app.add_subcommand("verify", "Check the structural identities on dense oracles");
  common(verify, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*mesh) return cmd_mesh(o);
    if (*solve) return cmd_solve(o);
    if (*simulate) return cmd_simulate(o);
    if (*bench) return cmd_bench(o);
    return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
