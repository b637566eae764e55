#include <cmath>

#include "doctest.h"
#include "stefan/error.hpp"
#include "stefan/model.hpp"

using namespace stefan;

namespace {

ModelParams constant_params() {
  ModelParams p;
  p.T = 1.0;
  p.m1 = CoefficientField::constant(1.0, 1.0);
  p.m2 = CoefficientField::constant(1.0, 1.0);
  p.b1 = CoefficientField::constant(1.0, 1.0);
  p.b2 = CoefficientField::constant(1.0, 1.0);
  p.c1 = CoefficientField::constant(1.0, 0.2);
  p.c2 = CoefficientField::constant(1.0, 0.3);
  p.init.h0 = 2.0;
  p.init.u0.shape = RadialProfile::Cosine{0.5};
  p.init.v0.shape = RadialProfile::Constant{1.0};
  return p;
}

}  // namespace

TEST_CASE("benchmark parameters satisfy the structural hypotheses") {
  const auto p = constant_params();
  p.validate();
  const auto report = check_H1(p);
  CHECK(report.pass);
  CHECK(classify_environment(p) == Environment::Weak);
}

TEST_CASE("non-positive competition coefficient fails with a witness") {
  auto p = constant_params();
  p.c1 = CoefficientField::gaussian_dip(PeriodicScalarFunction::constant(1.0, 0.5), 1.0, 3.0, 0.5);
  const auto report = check_H1(p);
  CHECK_FALSE(report.pass);
  bool found = false;
  for (const auto& c : report.clauses) {
    if (!c.pass && c.witness) {
      found = true;
      CHECK(c.witness->value <= 0.0);
      CHECK(std::abs(c.witness->r - 3.0) < 0.5 * std::sqrt(std::log(2.0)));
    }
  }
  CHECK(found);
}

TEST_CASE("initial data admissibility") {
  auto p = constant_params();
  CHECK_NOTHROW(p.init.validate(20.0));
  CHECK(p.init.u(2.5) == 0.0);
  CHECK(p.init.u(0.0) == doctest::Approx(0.5));
  CHECK(p.init.u_sup() == doctest::Approx(0.5));
  // u0' at s = 1 in r: 0.5 * pi/2 / h0
  CHECK(p.init.u_c1_norm() == doctest::Approx(0.5 + 0.5 * std::acos(-1.0) / 4.0).epsilon(1e-3));

  p.init.u0.shape = RadialProfile::Constant{1.0};  // nonzero at the front
  CHECK_THROWS_AS(p.init.validate(20.0), Error);
  p.init.u0.shape = RadialProfile::Cosine{-0.5};
  CHECK_THROWS_AS(p.init.validate(20.0), Error);
}

TEST_CASE("positivity at infinity from probe radii") {
  const auto dip = CoefficientField::gaussian_dip(PeriodicScalarFunction::sinusoid(1.0, 0.5, 0.2),
                                                  3.0, 0.0, 1.0);
  const auto h2 = check_H2(dip, default_probe_radii(1.0));
  CHECK(h2.pass);
  CHECK(h2.liminf == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(h2.limsup == doctest::Approx(0.7).epsilon(1e-3));

  // a field still drifting at the largest probes does not stabilize
  std::vector<double> vals;
  const int nt = 4, nr = 400;
  for (int k = 0; k < nt; ++k)
    for (int i = 0; i <= nr; ++i) vals.push_back(1.0 + 0.01 * i);
  const auto ramp = CoefficientField::tabulated(RadialPeriodicField(1.0, 400.0, nt, nr, vals));
  CHECK_THROWS_AS(check_H2(ramp, {50.0, 100.0, 200.0, 400.0}), Error);
}

TEST_CASE("environment classification") {
  auto p = constant_params();
  CHECK(classify_environment(p) == Environment::Weak);
  const auto base = PeriodicScalarFunction::constant(1.0, 1.0);
  p.m1 = CoefficientField::gaussian_dip(base, 2.0, p.h0() / 2.0, 1.0);
  p.m2 = CoefficientField::gaussian_dip(base, 2.0, p.h0() / 2.0, 1.0);
  CHECK(classify_environment(p) == Environment::Strong);
  p.m2 = CoefficientField::constant(1.0, 1.0);
  CHECK(classify_environment(p) == Environment::Neither);
}
