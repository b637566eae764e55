#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stefan/coefficient_field.hpp"
#include "stefan/error.hpp"

using namespace stefan;

TEST_CASE("periodic rules repeat with the period") {
  const double T = 0.7;
  const PeriodicScalarFunction rules[] = {
      PeriodicScalarFunction::constant(T, 2.0),
      PeriodicScalarFunction::sinusoid(T, 1.0, 0.5, 0.3),
      PeriodicScalarFunction::tabulated(T, {1.0, 3.0, 2.0, 0.5, 4.0}),
  };
  for (const auto& f : rules) {
    for (int i = 0; i < 50; ++i) {
      const double t = 0.013 * i;
      for (int k = 1; k <= 3; ++k) {
        CHECK(f(t + k * T) == doctest::Approx(f(t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("tabulated rule interpolates linearly and wraps") {
  const auto f = PeriodicScalarFunction::tabulated(1.0, {0.0, 1.0, 2.0, 3.0});
  CHECK(f(0.125) == doctest::Approx(0.5));
  CHECK(f(0.875) == doctest::Approx(1.5));  // between 3 and the wrapped 0
  CHECK(f.mean() == doctest::Approx(1.5));
  CHECK(f.min() == 0.0);
  CHECK(f.max() == 3.0);
}

TEST_CASE("tabulated rule rejects fewer than four samples") {
  CHECK_THROWS_AS(PeriodicScalarFunction::tabulated(1.0, {1.0, 2.0, 3.0}), Error);
}

TEST_CASE("sinusoid mean and extrema are exact") {
  const auto f = PeriodicScalarFunction::sinusoid(2.0, 1.0, -0.5);
  CHECK(f.mean() == 1.0);
  CHECK(f.min() == 0.5);
  CHECK(f.max() == 1.5);
  CHECK(f(0.5) == doctest::Approx(0.5));  // sin(pi/2) = 1 with negative amplitude
}

TEST_CASE("gaussian dip envelopes and asymptotics") {
  const auto base = PeriodicScalarFunction::sinusoid(1.0, 1.0, 0.2);
  const auto m = CoefficientField::gaussian_dip(base, 2.0, 0.5, 1.0);
  CHECK(m.lower()(0.25) == doctest::Approx(1.2 - 2.0));
  CHECK(m.upper()(0.25) == doctest::Approx(1.2));
  REQUIRE(m.asymptotic_liminf());
  CHECK((*m.asymptotic_liminf())(0.25) == doctest::Approx(1.2));
  CHECK(m(0.25, 0.5) == doctest::Approx(-0.8));
  CHECK(m.time_mean(0.5) == doctest::Approx(-1.0));
  CHECK_FALSE(m.space_constant());
  CHECK_FALSE(m.time_constant());
}

TEST_CASE("envelope containment on random samples") {
  // deterministic LCG so the sample set is reproducible
  std::uint64_t state = 12345;
  auto uniform = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) / static_cast<double>(1ULL << 53);
  };
  const CoefficientField fields[] = {
      CoefficientField::gaussian_dip(PeriodicScalarFunction::sinusoid(1.0, 1.0, 0.5), 2.0, 1.0, 0.7),
      CoefficientField::gaussian_dip(PeriodicScalarFunction::constant(1.0, 0.5), -1.0, -0.5, 1.0),
      CoefficientField::tabulated(RadialPeriodicField(1.0, 2.0, 4, 2,
                                                      {1, 2, 3, 0.5, 0.7, 0.9, 2, 2, 2, 1, 4, 1})),
  };
  for (const auto& f : fields) {
    for (int i = 0; i < 10000; ++i) {
      const double t = uniform() * 3.0;
      const double r = uniform() * 10.0;
      const double v = f(t, r);
      CHECK(v >= f.lower()(t) - 1e-12);
      CHECK(v <= f.upper()(t) + 1e-12);
    }
  }
}

TEST_CASE("composite field subtracts the inflated competition term") {
  const double T = 1.0;
  std::vector<double> ones(4 * 11, 1.0);
  RadialPeriodicField V(T, 10.0, 4, 10, ones);
  const auto f = CoefficientField::composite(CoefficientField::constant(T, 1.0),
                                             CoefficientField::constant(T, 0.2), V, 1.5);
  CHECK(f(0.3, 4.0) == doctest::Approx(0.7));
  CHECK(f.lower()(0.3) == doctest::Approx(0.7));
}
