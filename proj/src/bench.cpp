#include "bidomain/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace bidomain {

double growth_rate(double cost_prev, double cost_cur, double dof_prev, double dof_cur) {
  if (!(cost_prev > 0.0) || !(cost_cur > 0.0) || !(dof_prev > 0.0) || !(dof_cur > 0.0)) {
    throw std::invalid_argument("growth_rate: costs and sizes must be positive");
  }
  if (!(dof_cur > dof_prev)) throw std::invalid_argument("growth_rate: sizes must increase");
  return std::log(cost_cur / cost_prev) / std::log(dof_cur / dof_prev);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log_log_slope: need at least two matching samples");
  }
  double const n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
      throw std::invalid_argument("log_log_slope: samples must be positive");
    }
    double const lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double const den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("log_log_slope: sizes must differ");
  return (n * sxy - sx * sy) / den;
}

void ScalingOptions::validate() const {
  if (series.size() < 2) throw std::invalid_argument("bench: series needs at least two sizes");
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] < 2) throw std::invalid_argument("bench: mesh sizes must be >= 2");
    if (k > 0 && series[k] <= series[k - 1]) {
      throw std::invalid_argument("bench: series must be strictly increasing");
    }
  }
  if (!(dt_coarse > 0.0)) throw std::invalid_argument("bench: dt_coarse must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("bench: t_end must be positive");
  if (calibration_trials < 10) throw std::invalid_argument("bench: calibration_trials must be >= 10");
  if (timing_repeats < 1) throw std::invalid_argument("bench: timing_repeats must be >= 1");
}

double calibrate_costs(const BidomainSystem& sys, const BlockLUPreconditioner& precond,
                       int trials, std::uint64_t seed) {
  if (trials < 10) throw std::invalid_argument("calibrate_costs: trials must be >= 10");
  using clock = std::chrono::steady_clock;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto x = BlockVector::zeros(sys.n(), sys.n_heart());
  for (auto& a : x.u) a = unif(rng);
  for (auto& a : x.v) a = unif(rng);
  double const mean = std::accumulate(x.u.begin(), x.u.end(), 0.0) / static_cast<double>(x.u.size());
  for (auto& a : x.u) a -= mean;

  std::vector<double> t_mv, t_p;
  double sink = 0.0;
  for (int k = 0; k < trials; ++k) {
    auto t0 = clock::now();
    auto y = apply_lambda(sys, x);
    auto t1 = clock::now();
    auto z = precond.apply_inverse(x);
    auto t2 = clock::now();
    sink += y.u[0] + z.v[0];
    t_mv.push_back(std::chrono::duration<double>(t1 - t0).count());
    t_p.push_back(std::chrono::duration<double>(t2 - t1).count());
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  if (!std::isfinite(sink)) return std::numeric_limits<double>::quiet_NaN();
  return median(t_p) / median(t_mv);
}

namespace {

BenchRecord run_entry(int index, int cells, const ScalingOptions& opt,
                      const SimulationConfig& base) {
  SimulationConfig cfg = base;
  cfg.mesh = {3, cells, false};
  cfg.dt = opt.dt_coarse * static_cast<double>(opt.series.front()) / static_cast<double>(cells);
  cfg.t_end = opt.t_end;
  cfg.snapshot_every = 0;

  auto const mesh = build_mesh(cfg.mesh);
  Simulator sim(cfg, mesh);
  auto const res = sim.run();
  std::vector<double> cpu{res.stats.cpu_avg_s()};
  for (int k = 1; k < opt.timing_repeats; ++k) {
    cpu.push_back(Simulator(cfg, mesh).run().stats.cpu_avg_s());
  }
  std::nth_element(cpu.begin(), cpu.begin() + static_cast<std::ptrdiff_t>(cpu.size() / 2), cpu.end());

  BenchRecord rec;
  rec.n = index + 1;
  rec.cells = cells;
  rec.dof = sim.system().n() + sim.system().n_heart();
  rec.dt = cfg.dt;
  rec.iter_avg = res.stats.iter_avg();
  rec.cpu_avg_s = cpu[cpu.size() / 2];
  rec.window_solves = res.stats.window_steps;
  rec.worst_solve = res.stats.worst_window_solve;
  rec.mv_equivalent = calibrate_costs(sim.system(), sim.preconditioner(),
                                      opt.calibration_trials, opt.seed);
  return rec;
}

} // namespace

ScalingResult run_scaling_study(const ScalingOptions& opt, const SimulationConfig& base) {
  opt.validate();
  if (base.mesh.dim != 3) {
    throw std::invalid_argument("bench: the scaling study needs a 3D base configuration");
  }
  ScalingResult out;

  if (opt.parallel) {
    // Timings of concurrent entries contend for cores and caches.
    std::vector<std::future<BenchRecord>> jobs;
    for (std::size_t k = 0; k < opt.series.size(); ++k) {
      jobs.push_back(std::async(std::launch::async, run_entry, static_cast<int>(k),
                                opt.series[k], std::cref(opt), std::cref(base)));
    }
    for (auto& j : jobs) {
      try {
        if (!out.failure) out.records.push_back(j.get());
        else j.wait();
      } catch (const std::exception& e) {
        out.failure = e.what();
      }
    }
  } else {
    for (std::size_t k = 0; k < opt.series.size(); ++k) {
      try {
        out.records.push_back(run_entry(static_cast<int>(k), opt.series[k], opt, base));
      } catch (const std::exception& e) {
        out.failure = e.what();
        break;
      }
    }
  }

  auto& recs = out.records;
  double const nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < recs.size(); ++k) {
    recs[k].r_iter = recs[k].r_cpu = nan;
    if (k == 0) continue;
    auto const& a = recs[k - 1];
    auto const& b = recs[k];
    auto const da = static_cast<double>(a.dof), db = static_cast<double>(b.dof);
    if (a.iter_avg > 0.0 && b.iter_avg > 0.0) {
      recs[k].r_iter = growth_rate(a.iter_avg * da, b.iter_avg * db, da, db);
    }
    if (a.cpu_avg_s > 0.0 && b.cpu_avg_s > 0.0) {
      recs[k].r_cpu = growth_rate(a.cpu_avg_s, b.cpu_avg_s, da, db);
    }
  }

  out.slope_iter_dof = out.slope_cpu = nan;
  if (recs.size() >= 2) {
    std::vector<double> dof, cost, cpu;
    bool have_iter = true, have_cpu = true;
    for (auto const& r : recs) {
      dof.push_back(static_cast<double>(r.dof));
      cost.push_back(static_cast<double>(r.dof) * r.iter_avg);
      cpu.push_back(r.cpu_avg_s);
      have_iter = have_iter && r.iter_avg > 0.0;
      have_cpu = have_cpu && r.cpu_avg_s > 0.0;
    }
    if (have_iter) out.slope_iter_dof = log_log_slope(dof, cost);
    if (have_cpu) out.slope_cpu = log_log_slope(dof, cpu);
  }
  return out;
}

void write_scaling_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "n,dof,iter_avg,cpu_avg_s,r_iter,r_cpu\n" << std::setprecision(10);
  for (auto const& r : records) {
    os << r.n << ',' << r.dof << ',' << r.iter_avg << ',' << r.cpu_avg_s << ',' << r.r_iter
       << ',' << r.r_cpu << '\n';
  }
}

void write_calibration_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "dof,mv_equiv\n" << std::setprecision(10);
  for (auto const& r : records) os << r.dof << ',' << r.mv_equivalent << '\n';
}

void write_iteration_table(std::ostream& os, std::span<const std::string> variants,
                           std::span<const std::vector<BenchRecord>> records) {
  if (variants.size() != records.size() || variants.empty()) {
    throw std::invalid_argument("write_iteration_table: one record list per variant");
  }
  auto const rows = records.front().size();
  for (auto const& r : records) {
    if (r.size() != rows) throw std::invalid_argument("write_iteration_table: series differ");
  }
  os << "n,dof";
  for (auto const& v : variants) os << ",iter_" << v;
  os << '\n' << std::setprecision(10);
  for (std::size_t k = 0; k < rows; ++k) {
    os << records.front()[k].n << ',' << records.front()[k].dof;
    for (auto const& r : records) os << ',' << r[k].iter_avg;
    os << '\n';
  }
}

} // namespace bidomain
