#include "bidomain/assembly.hpp"
#include "bidomain/oracle.hpp"
#include "bidomain/precond.hpp"

#include "instances.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <cmath>

using namespace bidomain;
using namespace testing_support;

namespace {

// Isolated heart with extracellular tensor equal to twice the
// intracellular one.
ConductivityParams equal_anisotropy(int dim) {
  auto p = ConductivityParams::defaults(dim);
  p.g_e_l = 2.0 * p.g_i_l;
  p.g_e_t = 2.0 * p.g_i_t;
  return p;
}

} // namespace

TEST_CASE("K_m pattern and kernel") {
  for (auto const& inst : small_instances()) {
    CAPTURE(inst.name);
    auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
    auto km = build_Km(inst.mesh, inst.params, inst.gamma);
    CHECK(km.same_pattern(sys.si()));
    CHECK(km.is_symmetric());
    auto k1 = km.multiply(std::vector<double>(km.rows(), 1.0));
    auto m1 = sys.heart_mass().diagonal_values();
    for (std::size_t i = 0; i < k1.size(); ++i) {
      CHECK(k1[i] == doctest::Approx(inst.gamma * m1[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("K_m equals the exact Schur complement under equal anisotropy") {
  for (auto const& mesh : {build_square_mesh(5), build_cube_mesh(2)}) {
    auto p = equal_anisotropy(mesh.dim());
    double const g = gamma(p.chi, p.c_m, 0.1);
    auto sys = BidomainSystem::assemble(mesh, p, g);
    auto k = oracle::exact_K(sys);
    auto km = oracle::to_dense(build_Km(mesh, p, g));
    CHECK((k - km).norm() <= 1e-10 * k.norm());
  }
}

TEST_CASE("regularized S_1") {
  auto inst = small_instances()[0];
  auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
  auto reg = regularize_S1(sys.s1());
  auto const n = reg.size();
  auto d = sys.s1().diagonal_values();
  double mean_diag = 0.0;
  for (double a : d) mean_diag += a / static_cast<double>(n);
  CHECK(reg.beta() == doctest::Approx(mean_diag));

  // Dense S~_1 built by hand is SPD.
  oracle::DenseMatrix st = oracle::to_dense(sys.s1());
  st.array() += reg.beta() / static_cast<double>(n);
  CHECK(st.llt().info() == Eigen::Success);

  std::mt19937_64 rng(7);
  auto x = random_vector(n, rng);
  auto ax = reg.apply(x);
  Eigen::Map<const oracle::DenseVector> xv(x.data(), static_cast<Eigen::Index>(n));
  oracle::DenseVector ref = st * xv;
  for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] == doctest::Approx(ref(i)).epsilon(1e-12));

  RegularizedInverse inv(reg, InnerKind::exact);
  auto one = inv.apply_inverse(std::vector<double>(n, 1.0));
  for (double a : one) CHECK(a == doctest::Approx(1.0 / reg.beta()).epsilon(1e-10));

  auto pinv = oracle::pseudo_inverse(oracle::to_dense(sys.s1()));
  for (int t = 0; t < 5; ++t) {
    auto y = random_vector(n, rng);
    remove_mean(y);
    auto z = inv.apply_inverse(y);
    Eigen::Map<const oracle::DenseVector> yv(y.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<const oracle::DenseVector> zv(z.data(), static_cast<Eigen::Index>(n));
    CHECK((zv - pinv * yv).norm() <= 1e-9 * (pinv * yv).norm());
  }
}

TEST_CASE("block-LU preconditioner counters and linearity") {
  auto inst = small_instances()[0];
  auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
  auto km = build_Km(inst.mesh, inst.params, inst.gamma);
  auto p = BlockLUPreconditioner::build(sys, km, InnerKind::ic0);

  auto zero = p->apply_inverse(BlockVector::zeros(sys.n(), sys.n_heart()));
  for (double a : zero.u) CHECK(a == 0.0);
  for (double a : zero.v) CHECK(a == 0.0);

  p->reset_counters();
  std::mt19937_64 rng(1);
  BlockVector y{random_vector(sys.n(), rng), random_vector(sys.n_heart(), rng)};
  p->apply_inverse(y);
  auto c = p->counters();
  CHECK(c.p1 == 2);
  CHECK(c.pk == 1);
  CHECK(c.si == 2);
  CHECK(c.applications == 1);
}

TEST_CASE("exact preconditioner equals the system matrix under equal anisotropy") {
  for (auto const& mesh : {build_square_mesh(6), build_cube_mesh(3)}) {
    auto prm = equal_anisotropy(mesh.dim());
    double const g = gamma(prm.chi, prm.c_m, 0.1);
    auto sys = BidomainSystem::assemble(mesh, prm, g);
    auto km = build_Km(mesh, prm, g);
    auto p = BlockLUPreconditioner::build(sys, km, InnerKind::exact);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
      BlockVector y{random_vector(sys.n(), rng), random_vector(sys.n_heart(), rng)};
      remove_mean(y.u);
      auto x = p->apply_inverse(y);
      auto r = apply_lambda(sys, x);
      for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] -= y.u[i];
      for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= y.v[i];
      // u residual constant, v residual zero
      double const c = r.u[0];
      double spread = 0.0, vres = 0.0;
      for (double a : r.u) spread = std::max(spread, std::abs(a - c));
      for (double a : r.v) vres = std::max(vres, std::abs(a));
      double const scale = norm2(y);
      CHECK(spread <= 1e-10 * scale);
      CHECK(vres <= 1e-10 * scale);
    }
  }
}
