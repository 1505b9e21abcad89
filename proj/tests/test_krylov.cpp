#include "bidomain/krylov.hpp"
#include "bidomain/oracle.hpp"

#include "instances.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace bidomain;
using namespace testing_support;

namespace {

struct Fixture {
  Instance inst;
  BidomainSystem sys;
  SparseMatrix km;

  explicit Fixture(Instance i)
      : inst(std::move(i)), sys(BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma)),
        km(build_Km(inst.mesh, inst.params, inst.gamma)) {}
};

BlockVector random_rhs(const BidomainSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BlockVector y{random_vector(sys.n(), rng), random_vector(sys.n_heart(), rng)};
  remove_mean(y.u);
  return y;
}

double true_residual(const BidomainSystem& sys, const BlockVector& x, const BlockVector& y) {
  auto r = apply_lambda(sys, x);
  for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] -= y.u[i];
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= y.v[i];
  return norm2(r) / norm2(y);
}

} // namespace

TEST_CASE("zero right hand side") {
  Fixture f(small_instances()[0]);
  auto p = BlockLUPreconditioner::build(f.sys, f.km, InnerKind::exact);
  auto res = pcg_solve(f.sys, *p, BlockVector::zeros(f.sys.n(), f.sys.n_heart()));
  CHECK(res.stats.iterations == 0);
  CHECK(res.stats.mv_count == 0);
  for (double a : res.x.u) CHECK(a == 0.0);
  for (double a : res.x.v) CHECK(a == 0.0);
}

TEST_CASE("right hand side outside the range is rejected") {
  Fixture f(small_instances()[0]);
  auto p = BlockLUPreconditioner::build(f.sys, f.km, InnerKind::exact);
  BlockVector y{std::vector<double>(f.sys.n(), 1.0), std::vector<double>(f.sys.n_heart(), 0.0)};
  CHECK_THROWS_AS(pcg_solve(f.sys, *p, y), std::invalid_argument);
}

TEST_CASE("tolerance and accounting for every inner solver") {
  for (auto const& inst : small_instances()) {
    Fixture f(inst);
    for (auto kind : {InnerKind::exact, InnerKind::ic0, InnerKind::jacobi}) {
      CAPTURE(inst.name);
      CAPTURE(inner_kind_name(kind));
      auto p = BlockLUPreconditioner::build(f.sys, f.km, kind);
      auto y = random_rhs(f.sys, 3);
      auto res = pcg_solve(f.sys, *p, y);
      auto const& st = res.stats;
      CHECK(st.final_residual() <= 1e-6);
      CHECK(st.iterations >= 1);
      CHECK(st.residual_history.size() == static_cast<std::size_t>(st.iterations) + 1);
      CHECK(st.residual_history.front() == doctest::Approx(1.0));
      CHECK(st.mv_count == static_cast<std::size_t>(st.iterations) + 1);
      CHECK(st.p1_count == 2 * st.pk_count);
      CHECK(true_residual(f.sys, res.x, y) <= 1e-5);
      CHECK(std::abs(weighted_mean(f.sys.mass(), res.x.u)) <= 1e-12 * norm2(res.x));
    }
  }
}

TEST_CASE("solution matches the dense solve") {
  Fixture f(small_instances()[2]);
  auto p = BlockLUPreconditioner::build(f.sys, f.km, InnerKind::ic0);
  auto y = random_rhs(f.sys, 8);
  auto res = pcg_solve(f.sys, *p, y, {1e-12, 500});

  oracle::DenseSystem d(f.sys);
  auto ref = oracle::unstack(d.lu_solve(oracle::stack(y)), f.sys.n());
  ref = normalize_u(f.sys, ref);
  double err = 0.0;
  for (std::size_t i = 0; i < ref.u.size(); ++i) err = std::max(err, std::abs(ref.u[i] - res.x.u[i]));
  for (std::size_t i = 0; i < ref.v.size(); ++i) err = std::max(err, std::abs(ref.v[i] - res.x.v[i]));
  double scale = 0.0;
  for (double a : ref.v) scale = std::max(scale, std::abs(a));
  CHECK(err <= 1e-8 * scale);
}

TEST_CASE("energy norm of the error decreases monotonically") {
  Fixture f(small_instances()[0]);
  oracle::DenseSystem d(f.sys);
  auto const lam = d.lambda();
  auto y = random_rhs(f.sys, 12);
  auto const xs = d.lu_solve(oracle::stack(y));
  auto energy = [&](const BlockVector& x) {
    oracle::DenseVector const e = oracle::stack(x) - xs;
    return e.dot(lam * e);
  };

  for (auto kind : {InnerKind::jacobi, InnerKind::ic0}) {
    CAPTURE(inner_kind_name(kind));
    auto p = BlockLUPreconditioner::build(f.sys, f.km, kind);
    std::vector<double> hist{energy(BlockVector::zeros(f.sys.n(), f.sys.n_heart()))};
    PcgOptions opt{1e-10, 500};
    opt.on_iterate = [&](int, const BlockVector& x) { hist.push_back(energy(x)); };
    auto r = pcg_solve(f.sys, *p, y, opt);
    CHECK(hist.size() == static_cast<std::size_t>(r.stats.iterations) + 1);
    for (std::size_t k = 1; k < hist.size(); ++k) {
      CHECK(hist[k] <= hist[k - 1] * (1.0 + 1e-12) + 1e-20 * hist.front());
    }
    for (double a : r.stats.preconditioned_residual) CHECK(a > 0.0);
  }
}

TEST_CASE("convergence failure carries the statistics") {
  Fixture f(small_instances()[0]);
  auto p = BlockLUPreconditioner::build(f.sys, f.km, InnerKind::jacobi);
  auto y = random_rhs(f.sys, 1);
  try {
    pcg_solve(f.sys, *p, y, {1e-14, 2});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.stats().iterations == 2);
    CHECK(e.stats().residual_history.size() == 3);
  }
  CHECK_THROWS_AS(pcg_solve(f.sys, *p, y, {0.0, 10}), std::invalid_argument);
}

TEST_CASE("residual csv") {
  SolveStats st;
  st.residual_history = {1.0, 0.5};
  std::ostringstream os;
  write_residual_csv(os, st);
  CHECK(os.str() == "iter,rel_residual\n0,1\n1,0.5\n");
}

TEST_CASE("one iteration when the monodomain surrogate is exact") {
  for (auto const& mesh : {build_square_mesh(8), build_cube_mesh(4)}) {
    auto p = ConductivityParams::defaults(mesh.dim());
    p.g_e_l = 2.0 * p.g_i_l;
    p.g_e_t = 2.0 * p.g_i_t;
    double const g = gamma(p.chi, p.c_m, 0.1);
    auto sys = BidomainSystem::assemble(mesh, p, g);
    auto pre = BlockLUPreconditioner::build(sys, build_Km(mesh, p, g), InnerKind::exact);
    auto y = random_rhs(sys, 21);
    auto res = pcg_solve(sys, *pre, y, {1e-12, 10});
    CHECK(res.stats.iterations == 1);
    CHECK(res.stats.final_residual() <= 1e-12);
  }
}
