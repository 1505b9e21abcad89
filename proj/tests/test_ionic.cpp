#include "bidomain/ionic.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace bidomain;

TEST_CASE("ionic current") {
  IonicParams p;
  CHECK(i_ion(-90.0, 0.3, p) == 0.0);
  CHECK(i_ion(-90.0, 1.0, p, 2.0) == 0.0);
  // Peak with the gate closed: only the outward term 140 u / tau_out.
  CHECK(i_ion(50.0, 0.0, p) == doctest::Approx(140.0 / 6.0));
  // u = 0.5, w = 1: -140 (0.25 * 0.5 / 0.3 - 0.5 / 6)
  CHECK(i_ion(-20.0, 1.0, p) == doctest::Approx(-140.0 * (0.125 / 0.3 - 0.5 / 6.0)));
  CHECK(i_ion(-20.0, 1.0, p) == doctest::Approx(-46.6667).epsilon(1e-5));
  CHECK(i_ion(-20.0, 1.0, p, 2.0) == doctest::Approx(2.0 * i_ion(-20.0, 1.0, p)));
}

TEST_CASE("gate update") {
  IonicParams p;
  double const below = p.v_rest + 0.5 * p.u_gate * (p.v_peak - p.v_rest);
  double const above = p.v_rest + 2.0 * p.u_gate * (p.v_peak - p.v_rest);
  CHECK(gate_update(1.0, below, 0.1, p) == 1.0);
  CHECK(gate_update(1.0, above, 150.0, p) == doctest::Approx(0.0));
  CHECK(gate_update(0.0, below, 120.0, p) == doctest::Approx(1.0));
  CHECK(gate_update(0.5, below, 1.0, p) == doctest::Approx(0.5 + 0.5 / 120.0));
  CHECK(gate_update(0.5, above, 1.0, p) == doctest::Approx(0.5 - 0.5 / 150.0));
  for (double w : {0.0, 0.2, 0.9, 1.0}) {
    for (double v : {-90.0, -70.0, 0.0, 50.0}) {
      double const n = gate_update(w, v, 120.0, p);
      CHECK(n >= 0.0);
      CHECK(n <= 1.0);
    }
  }
}

TEST_CASE("parameter validation") {
  IonicParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.normalized(-90.0) == 0.0);
  CHECK(p.normalized(50.0) == 1.0);
  p.tau_in = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  IonicParams q;
  q.v_peak = q.v_rest;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("stimulus") {
  auto s = StimulusProtocol::defaults(3);
  REQUIRE(s.sites.size() == 1);
  Point const c = s.sites[0].center;
  CHECK(c == Point{0.5, 0.5, 0.5});
  CHECK(stimulus(c, 0.0, s) == 100.0);
  CHECK(stimulus(c, 0.99, s) == 100.0);
  CHECK(stimulus(c, 1.0, s) == 0.0);
  CHECK(stimulus({0.5 + 0.1, 0.5, 0.5}, 0.5, s) == 100.0);
  CHECK(stimulus({0.5 + 0.1 + 1e-9, 0.5, 0.5}, 0.5, s) == 0.0);

  auto s2 = StimulusProtocol::defaults(2);
  CHECK(s2.sites.size() == 4);
  CHECK(stimulus({0.35, 0.4, 0}, 0.5, s2) == 100.0);
  CHECK(stimulus({0.65, 0.4, 0}, 0.5, s2) == 0.0);
  CHECK(stimulus({0.65, 0.4, 0}, 5.5, s2) == 100.0);
  CHECK(stimulus({0.35, 0.4, 0}, 5.5, s2) == 0.0);

  StimulusProtocol bad = s;
  bad.radius = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
