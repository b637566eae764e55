#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stefan/entire_solutions.hpp"
#include "stefan/error.hpp"
#include "stefan/periodic_ode.hpp"

using namespace stefan;

namespace {

CoefficientField constant(double v) { return CoefficientField::constant(1.0, v); }

CoefficientField dip(double amplitude, double width) {
  return CoefficientField::gaussian_dip(PeriodicScalarFunction::constant(1.0, 1.0), amplitude, 0.0,
                                        width);
}

ModelParams params_with(CoefficientField m1, CoefficientField c1) {
  ModelParams p;
  p.m1 = std::move(m1);
  p.m2 = constant(1.0);
  p.b1 = constant(1.0);
  p.b2 = constant(1.0);
  p.c1 = std::move(c1);
  p.c2 = constant(0.3);
  p.init.h0 = 1.0;
  p.init.u0.shape = RadialProfile::Cosine{0.5};
  p.init.v0.shape = RadialProfile::Constant{1.0};
  return p;
}

RadialPeriodicField flat(double value) {
  return RadialPeriodicField(1.0, 20.0, 8, 40, std::vector<double>(8 * 41, value));
}

}  // namespace

TEST_CASE("flat coefficients give the flat fixed point") {
  const auto sol = solve_periodic_entire(1.0, constant(1.0), constant(1.0), 1, 20.0, 200);
  CHECK(sol.field.min() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.field.max() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("space-constant growth reduces to the periodic logistic equation") {
  const auto a = PeriodicScalarFunction::sinusoid(1.0, 1.0, 0.5);
  const auto ode = solve_periodic_logistic(a, PeriodicScalarFunction::constant(1.0, 1.0));
  const auto sol =
      solve_periodic_entire(1.0, CoefficientField::time_periodic(a), constant(1.0), 2, 10.0, 64);
  CHECK(sol.residual < 1e-6);
  double gap = 0.0;
  for (int k = 0; k < sol.field.time_samples(); ++k) {
    for (int i = 0; i <= sol.field.intervals(); ++i) {
      gap = std::max(gap, std::abs(sol.field.at(k, i) - ode.V(sol.field.time(k))));
    }
  }
  CHECK(gap < 1e-6);
}

TEST_CASE("gaussian dip against the doubled-resolution run") {
  const auto m = CoefficientField::gaussian_dip(PeriodicScalarFunction::constant(1.0, 1.0), 2.0, 0.0,
                                                1.0);
  const auto coarse = solve_periodic_entire(1.0, m, constant(1.0), 2, 20.0, 1000);
  EntireOptions fine_opts;
  fine_opts.steps_per_period = 512;
  const auto fine = solve_periodic_entire(1.0, m, constant(1.0), 2, 20.0, 2000, fine_opts);
  double gap = 0.0;
  for (int k = 0; k < coarse.field.time_samples(); ++k) {
    for (int i = 0; i <= coarse.field.intervals(); ++i) {
      gap = std::max(gap, std::abs(coarse.field.at(k, i) - fine.field.at(2 * k, 2 * i)));
    }
  }
  CHECK(gap < 1e-3);
  CHECK(coarse.field.min() > 0.0);
  CHECK(coarse.field.at(0, 0) < 0.6);
  CHECK(coarse.field.at(0, 1000) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("truncation stability and guess independence") {
  const auto m = CoefficientField::gaussian_dip(PeriodicScalarFunction::sinusoid(1.0, 1.0, 0.5), 2.0,
                                                0.0, 1.0);
  const auto base = solve_periodic_entire(1.0, m, constant(1.0), 2, 20.0, 1000);
  const auto wide = solve_periodic_entire(1.0, m, constant(1.0), 2, 40.0, 2000);
  double gap = 0.0;
  for (int k = 0; k < base.field.time_samples(); ++k) {
    for (int i = 0; i <= 500; ++i) gap = std::max(gap, std::abs(base.field.at(k, i) - wide.field.at(k, i)));
  }
  CHECK(gap < 1e-3);

  EntireOptions perturbed;
  for (int i = 0; i <= 1000; ++i) perturbed.initial.push_back(0.2 + 1.5 * std::exp(-0.01 * i));
  const auto other = solve_periodic_entire(1.0, m, constant(1.0), 2, 20.0, 1000, perturbed);
  double diff = 0.0;
  for (int k = 0; k < base.field.time_samples(); ++k) {
    for (int i = 0; i <= 1000; ++i) diff = std::max(diff, std::abs(base.field.at(k, i) - other.field.at(k, i)));
  }
  CHECK(diff < 1e-7);
}

TEST_CASE("collapse is reported as degenerate") {
  try {
    EntireOptions o;
    o.max_periods = 200;
    solve_periodic_entire(1.0, constant(-20.0), constant(1.0), 1, 10.0, 64, o);
    FAIL("expected Degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
}

TEST_CASE("asymptotic bounds on the tail") {
  const auto one = PeriodicScalarFunction::constant(1.0, 1.0);
  CHECK(check_asymptotic_bounds(flat(1.0), one, one).pass);

  const auto m = dip(2.0, 1.0);
  const auto ok = solve_periodic_entire(1.0, m, constant(1.0), 2, 20.0, 1000);
  const auto rep = check_asymptotic_bounds(ok.field, one, one);
  CHECK(rep.pass);
  CHECK(rep.epsilon == doctest::Approx(0.02));

  const auto bad = solve_periodic_entire(1.0, dip(2.0, 3.0), constant(1.0), 2, 5.0, 250);
  const auto fail_rep = check_asymptotic_bounds(bad.field, one, one);
  CHECK_FALSE(fail_rep.pass);
  CHECK(fail_rep.lower_margin < 0.0);
  CHECK(fail_rep.worst.r >= 4.0);
}

TEST_CASE("effective growth of the invader") {
  auto p = params_with(constant(1.0), constant(0.2));
  const auto f1 = effective_u_growth(p, flat(1.0), 1.0);
  const auto f15 = effective_u_growth(p, flat(1.0), 1.5);
  for (double t : {0.0, 0.3, 0.9}) {
    for (double r : {0.0, 3.0, 50.0}) {
      CHECK(f1(t, r) == doctest::Approx(0.8));
      CHECK(f15(t, r) == doctest::Approx(0.7));
    }
    CHECK((*f1.asymptotic_liminf())(t) == doctest::Approx(0.8));
    CHECK((*f1.asymptotic_limsup())(t) == doctest::Approx(0.8));
  }

  p = params_with(dip(1.5, 1.0), CoefficientField::gaussian_dip(
                                     PeriodicScalarFunction::sinusoid(1.0, 0.3, 0.1), -0.2, 2.0, 1.0));
  const auto V = solve_periodic_entire(1.0, p.m2, p.b2, 1, 20.0, 400).field;
  const auto f = effective_u_growth(p, V, 1.2);
  std::uint64_t state = 7;
  auto uniform = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) / static_cast<double>(1ULL << 53);
  };
  for (int s = 0; s < 1000; ++s) {
    const double t = 2.0 * uniform(), r = 20.0 * uniform();
    CHECK(f(t, r) == doctest::Approx(p.m1(t, r) - 1.2 * p.c1(t, r) * V(t, r)).epsilon(1e-12));
    CHECK(f(t, r) >= f.lower()(t) - 1e-9);
    CHECK(f(t, r) <= f.upper()(t) + 1e-9);
  }
}
