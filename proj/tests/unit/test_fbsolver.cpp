#include <cmath>

#include "bench.hpp"
#include "doctest.h"
#include "stefan/error.hpp"
#include "stefan/fbsolver.hpp"

using namespace stefan;

namespace {

SolverConfig short_config(double t_end, double r_out = 40.0) {
  SolverConfig c;
  c.Ns = 128;
  c.Nr = 400;
  c.steps_per_period = 128;
  c.R_out = r_out;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("a priori constants follow the closed formulas") {
  auto p = bench::spreading();
  const auto b = apriori_bounds(p, 40.0);
  CHECK(b.C1 == 1.0);
  CHECK(b.C2 == 1.0);
  const double pi = std::acos(-1.0);
  const double c1norm = 0.5 + 0.5 * pi / 4.0;
  CHECK(b.M == doctest::Approx(std::max({0.5, std::sqrt(0.5), 4.0 * c1norm / 3.0})).epsilon(1e-3));
  CHECK(b.C3 == doctest::Approx(2.0 * b.M * 5.0));
  p.init.u0.shape = RadialProfile::Cosine{3.0};
  CHECK(apriori_bounds(p, 40.0).C1 == 3.0);
}

TEST_CASE("configuration is validated") {
  const auto p = bench::spreading();
  auto c = short_config(1.0);
  CHECK_NOTHROW(c.validate(p));
  c.Ns = 64;
  CHECK_THROWS_AS(c.validate(p), Error);
  c = short_config(1.0);
  c.steps_per_period = 32;
  CHECK_THROWS_AS(c.validate(p), Error);
  c = short_config(1.0, 8.0);
  CHECK_THROWS_AS(c.validate(p), Error);
}

TEST_CASE("initial state sits on the solver grids") {
  const auto p = bench::spreading();
  const auto s = initial_state(p, short_config(1.0));
  REQUIRE(s.u.size() == 129);
  REQUIRE(s.v.size() == 401);
  CHECK(s.u.front() == doctest::Approx(0.5));
  CHECK(s.u.back() == 0.0);
  CHECK(s.h == 2.0);
}

TEST_CASE("every accepted step advances the front and keeps the boundary value") {
  const auto p = bench::spreading();
  FreeBoundarySolver solver(p, short_config(2.0));
  auto s = initial_state(p, solver.config());
  for (int k = 0; k < 200; ++k) {
    const double h = s.h;
    solver.step(s);
    CHECK(s.h > h);
    CHECK(s.u.back() == 0.0);
    CHECK(s.dhdt > 0.0);
  }
  CHECK(s.t == doctest::Approx(200.0 / 128.0));
}

TEST_CASE("decoupled system is bit-identical to the scalar solver") {
  auto p = bench::spreading();
  p.c1 = bench::constant(0.0);
  p.c2 = bench::constant(0.0);
  const auto cfg = short_config(3.0);
  const auto coupled = simulate(p, cfg);
  const auto scalar = scalar_free_boundary(p, cfg);
  REQUIRE(coupled.records.size() == scalar.records.size());
  for (std::size_t k = 0; k < coupled.records.size(); ++k) {
    CHECK(coupled.records[k].h == scalar.records[k].h);
    CHECK(coupled.records[k].u_max == scalar.records[k].u_max);
  }
  CHECK(coupled.final_state.u == scalar.final_state.u);

  // a single step through the free function
  auto s0 = initial_state(p, cfg);
  auto s1 = step(s0, p, cfg);
  s0.v.clear();
  auto s2 = step(s0, p, cfg);
  CHECK(s1.u == s2.u);
  CHECK(s1.h == s2.h);
}

TEST_CASE("bounds hold on the spreading benchmark") {
  const auto p = bench::spreading();
  const auto traj = simulate(p, short_config(10.0));
  CHECK(traj.termination == Termination::Completed);
  const auto rep = verify_bounds(traj, p);
  CHECK(rep.max_u <= 1.0);
  CHECK(rep.min_dhdt > 0.0);
  CHECK(traj.records.back().h > 1.756);
}

TEST_CASE("violations surface as errors") {
  const auto p = bench::spreading();
  FreeBoundarySolver solver(p, short_config(1.0));
  auto s = initial_state(p, solver.config());
  for (auto& x : s.u) x *= 10.0;  // sup u = 5 > 2 C1
  try {
    solver.step(s);
    FAIL("expected StabilityFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StabilityFailure);
  }

  auto traj = simulate(p, short_config(1.0));
  traj.records[5].u_max = 1.5;
  CHECK_THROWS_AS(verify_bounds(traj, p), Error);
}

TEST_CASE("coarse time steps fail loudly or respect the bounds") {
  auto p = bench::spreading();
  p.mu = 500.0;
  p.m1 = bench::constant(30.0);
  auto c = short_config(2.0, 400.0);
  c.steps_per_period = 64;
  c.Nr = 64;
  const auto traj = run_simulation(p, c);
  if (traj.termination == Termination::Completed) {
    CHECK_NOTHROW(verify_bounds(traj, p));
  } else {
    CHECK(traj.termination != Termination::Interrupted);
  }
}

TEST_CASE("front reaching the truncation stops the run") {
  const auto p = bench::spreading();
  const auto traj = run_simulation(p, short_config(40.0, 9.0));
  CHECK(traj.termination == Termination::DomainExhausted);
  CHECK(traj.records.back().h < 0.9 * 9.0 + 0.1);
  CHECK_THROWS_AS(simulate(p, short_config(40.0, 9.0)), Error);
}

TEST_CASE("single species spreads and settles locally at the carrying capacity") {
  auto p = bench::spreading();
  const auto traj = scalar_free_boundary(p, short_config(15.0, 80.0));
  CHECK(traj.final_state.u.front() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(traj.final_state.h > 10.0);
  CHECK(traj.final_state.v.empty());
}

TEST_CASE("single species with weak expansion vanishes") {
  auto p = bench::spreading();
  p.mu = 0.01;
  p.init.h0 = 0.5;
  p.init.u0.shape = RadialProfile::Cosine{0.05};
  const auto traj = scalar_free_boundary(p, short_config(20.0, 10.0));
  CHECK(traj.records.back().u_max < 1e-10);
  const double h10 = traj.records[10 * 128].h;
  CHECK(traj.records.back().h - h10 < 1e-8);
}

TEST_CASE("comparison harness") {
  const auto p = bench::spreading();
  const auto cfg = short_config(5.0);
  const auto a = simulate(p, cfg);
  const auto b = simulate(p, cfg);
  const auto same = compare_runs(a, b, CompareMode::Full);
  CHECK(same.max_front_excess == 0.0);
  CHECK(std::abs(same.max_u_excess) <= 1e-12);
  CHECK(same.shared_times == a.records.size());

  const auto scalar = scalar_free_boundary(p, cfg);
  CHECK(compare_runs(a, scalar, CompareMode::FrontOnly).max_front_excess <= 0.0);

  auto big = p;
  big.init.u0.shape = RadialProfile::Cosine{1.0};
  const auto run_big = simulate(big, cfg);
  const auto rep = compare_runs(a, run_big, CompareMode::Full);
  CHECK(rep.max_front_excess <= 0.0);

  // reversed roles must be caught
  CHECK_THROWS_AS(compare_runs(run_big, a, CompareMode::FrontOnly), Error);
}

TEST_CASE("halving the time step barely moves the front") {
  const auto p = bench::spreading();
  auto c = short_config(10.0);
  const double h1 = simulate(p, c).records.back().h;
  c.steps_per_period *= 2;
  const double h2 = simulate(p, c).records.back().h;
  CHECK(std::abs(h1 - h2) / h2 < 0.01);
}

TEST_CASE("interrupt flag ends the run at a step boundary") {
  const auto p = bench::spreading();
  interrupt_flag() = true;
  const auto traj = run_simulation(p, short_config(5.0));
  interrupt_flag() = false;
  CHECK(traj.termination == Termination::Interrupted);
  CHECK(traj.records.size() == 1);
}
