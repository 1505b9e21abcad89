#include "bidomain/oracle.hpp"
#include "bidomain/system.hpp"

#include "instances.hpp"

#include <doctest.h>

#include <cmath>

using namespace bidomain;
using namespace testing_support;

TEST_CASE("gamma") {
  CHECK(gamma(500, 1.0, 0.2) == doctest::Approx(2500.0));
  CHECK(gamma(1500, 1.0, 0.05) == doctest::Approx(30000.0));
  CHECK_THROWS_AS(gamma(500, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma(-1, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("block vector algebra") {
  BlockVector a{{1, 2}, {3}}, b{{4, 5}, {6}};
  CHECK(dot(a, b) == 32.0);
  CHECK(norm2(a) == doctest::Approx(std::sqrt(14.0)));
}

TEST_CASE("system blocks") {
  for (auto const& inst : small_instances()) {
    CAPTURE(inst.name);
    auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
    CHECK(sys.n() == inst.mesh.vertex_count());
    CHECK(sys.n_heart() == inst.mesh.heart_vertex_count());
    CHECK(sys.s1().is_symmetric());
    CHECK(sys.si().is_symmetric());
    CHECK(sys.se().is_symmetric());
    CHECK(sys.gamma() == inst.gamma);
    CHECK_THROWS_AS(sys.check_sizes(BlockVector::zeros(sys.n() + 1, sys.n_heart())),
                    std::invalid_argument);
  }
}

TEST_CASE("apply_lambda: kernel, range and dense agreement") {
  std::mt19937_64 rng(11);
  for (auto const& inst : small_instances()) {
    CAPTURE(inst.name);
    auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
    auto const n = sys.n(), nh = sys.n_heart();

    BlockVector one{std::vector<double>(n, 1.0), std::vector<double>(nh, 0.0)};
    auto y = apply_lambda(sys, one);
    for (double a : y.u) CHECK(std::abs(a) < 1e-13);
    for (double a : y.v) CHECK(std::abs(a) < 1e-13);

    BlockVector x0{std::vector<double>(n, 0.0), random_vector(nh, rng)};
    auto y0 = apply_lambda(sys, x0);
    double sum = 0.0, scale = 0.0;
    for (double a : y0.u) {
      sum += a;
      scale += std::abs(a);
    }
    CHECK(std::abs(sum) < 1e-13 * scale);

    oracle::DenseSystem d(sys);
    auto const lam = d.lambda();
    for (int t = 0; t < 5; ++t) {
      BlockVector x{random_vector(n, rng), random_vector(nh, rng)};
      oracle::DenseVector const yr = oracle::stack(apply_lambda(sys, x));
      oracle::DenseVector const yd = lam * oracle::stack(x);
      CHECK((yr - yd).norm() <= 1e-12 * yd.norm());
    }
  }
}

TEST_CASE("right hand side") {
  auto inst = small_instances()[0];
  auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
  auto const nh = sys.n_heart();
  std::vector<double> zero(nh, 0.0);
  auto r0 = build_rhs(sys, zero, zero, zero, inst.params.chi);
  for (double a : r0.u) CHECK(a == 0.0);
  for (double a : r0.v) CHECK(a == 0.0);

  std::mt19937_64 rng(5);
  auto v = random_vector(nh, rng), ion = random_vector(nh, rng), st = random_vector(nh, rng);
  auto r = build_rhs(sys, v, ion, ion, inst.params.chi);
  auto const mh = sys.heart_mass().diagonal_values();
  for (std::size_t i = 0; i < nh; ++i) {
    CHECK(r.v[i] == doctest::Approx(inst.gamma * mh[i] * v[i]).epsilon(1e-14));
  }
  auto r2 = build_rhs(sys, v, ion, st, inst.params.chi);
  for (std::size_t i = 0; i < nh; ++i) {
    double const expect = mh[i] * (inst.gamma * v[i] - inst.params.chi * (ion[i] - st[i]));
    CHECK(r2.v[i] == doctest::Approx(expect).epsilon(1e-13));
  }
  for (double a : r2.u) CHECK(a == 0.0);
  CHECK_THROWS_AS(build_rhs(sys, std::vector<double>(nh + 1), ion, st, 1.0), std::invalid_argument);
}

TEST_CASE("normalization") {
  auto inst = small_instances()[0];
  auto sys = BidomainSystem::assemble(inst.mesh, inst.params, inst.gamma);
  auto const n = sys.n(), nh = sys.n_heart();
  auto const m = sys.mass().diagonal_values();

  BlockVector c{std::vector<double>(n, 3.5), std::vector<double>(nh, 1.0)};
  auto z = normalize_u(sys, c);
  for (double a : z.u) CHECK(std::abs(a) < 1e-14);
  CHECK(z.v == c.v);

  std::mt19937_64 rng(2);
  BlockVector x{random_vector(n, rng), random_vector(nh, rng)};
  auto xn = normalize_u(sys, x);
  double integral = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    integral += m[i] * xn.u[i];
    total += m[i];
  }
  CHECK(std::abs(integral) < 1e-14 * total);
  // Only a constant shift.
  for (std::size_t i = 1; i < n; ++i) {
    CHECK(xn.u[i] - xn.u[0] == doctest::Approx(x.u[i] - x.u[0]).epsilon(1e-12));
  }
  auto again = normalize_u(sys, xn);
  for (std::size_t i = 0; i < n; ++i) CHECK(again.u[i] == doctest::Approx(xn.u[i]).epsilon(1e-14));
}
