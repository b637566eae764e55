// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures, so ctest sees any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "oracles.hpp"
#include "stefan/analysis.hpp"
#include "stefan/eigensolver.hpp"
#include "stefan/entire_solutions.hpp"
#include "stefan/error.hpp"
#include "stefan/fbsolver.hpp"

using namespace stefan;

namespace {

const double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;
using P = PeriodicScalarFunction;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed sub-checks; the first few go on the result line.
struct Ledger {
  std::vector<std::string> failures;
  std::ostringstream info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class T>
  void note(const char* key, T value) {
    info << key << "=" << value << " ";
  }
};

int report(int id, const char* title, const std::function<void(Ledger&)>& body) {
  Ledger l;
  const auto t0 = Clock::now();
  try {
    body(l);
  } catch (const std::exception& e) {
    l.failures.push_back(std::string("exception: ") + e.what());
  }
  const double wall = seconds_since(t0);
  std::printf("%s criterion %d (%s): %s[%.1fs]", l.failures.empty() ? "PASS" : "FAIL", id, title,
              l.info.str().c_str(), wall);
  for (std::size_t i = 0; i < l.failures.size() && i < 4; ++i) std::printf(" | %s", l.failures[i].c_str());
  std::printf("\n");
  std::fflush(stdout);
  return l.failures.empty() ? 0 : 1;
}

CoefficientField constant(double v) { return CoefficientField::constant(1.0, v); }

EigenProblem eigen(double d, CoefficientField m, double R, int N = 1, int grid = 256) {
  EigenSettings s;
  s.grid = grid;
  s.steps_per_period = 256;
  return s.problem(d, std::move(m), R, 1.0, N);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// solver settings of the two benchmark presets
SolverConfig spread_config(double t_end) {
  SolverConfig c;
  c.Ns = 256;
  c.Nr = 2000;
  c.steps_per_period = 256;
  c.R_out = 100.0;
  c.t_end = t_end;
  return c;
}

SolverConfig vanish_config() {
  SolverConfig c;
  c.Ns = 128;
  c.Nr = 512;
  c.steps_per_period = 128;
  c.R_out = 40.0;
  c.t_end = 200.0;
  return c;
}

SolverConfig family_config() {
  auto c = vanish_config();
  c.steps_per_period = 64;
  c.t_end = 40.0;
  c.snapshot_every = 0;
  return c;
}

double sup(const std::vector<double>& x) {
  double m = -INFINITY;
  for (double v : x) m = std::max(m, v);
  return m;
}

// --- 1 ----------------------------------------------------------------------

void eigen_anchors(Ledger& l) {
  const double nu = kPi * kPi / 4.0;
  struct Case {
    const char* name;
    EigenProblem prob;
    double expected;
  };
  const double j01 = oracle::bessel_zero(0.0, 2.0, 3.0);
  const std::vector<Case> cases = {
      {"m=0", eigen(1.0, constant(0.0), 1.0), nu},
      {"m=2+sin", eigen(1.0, CoefficientField::time_periodic(P::sinusoid(1.0, 2.0, 1.0)), 1.0), nu - 2.0},
      {"N=2", eigen(1.0, constant(0.0), 1.0, 2, 512), j01 * j01},
  };
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const double lam = principal_eigenvalue(c.prob).lambda1;
    const double wall = seconds_since(t0);
    const double err = rel(lam, c.expected);
    l.note(c.name, err);
    l.expect(err <= 1e-3, std::string(c.name) + " relative error " + std::to_string(err));
    l.expect(wall < 5.0, std::string(c.name) + " took " + std::to_string(wall) + "s");
  }
}

// --- 2 ----------------------------------------------------------------------

void threshold_anchors(Ledger& l) {
  const auto h = threshold_radius(1.0, constant(1.0), 1.0, 1, 100.0);
  l.note("h*", h.value);
  l.expect(h.bounded && std::abs(h.value - kPi / 2.0) <= 1e-3, "h* = " + std::to_string(h.value));
  const auto d = threshold_diffusion_fast(constant(1.0), 1.0, 1.0, 1, 100.0);
  l.note("d*", d.value);
  l.expect(std::abs(d.value - 4.0 / (kPi * kPi)) <= 1e-3, "d* = " + std::to_string(d.value));
  const auto none = threshold_radius(1.0, constant(0.0), 1.0, 1, 100.0);
  l.expect(!none.bounded, "m = 0 reported a bounded h*");
}

// --- 3 ----------------------------------------------------------------------

RadialPeriodicField tabulated_grid(double shift) {
  const int nt = 8, nr = 40;
  std::vector<double> v;
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i <= nr; ++i) {
      const double r = 10.0 * i / nr;
      v.push_back(0.8 + 0.6 * std::cos(2.0 * kPi * k / nt) * std::exp(-r) + shift * std::exp(-0.1 * r * r));
    }
  }
  return RadialPeriodicField(1.0, 10.0, nt, nr, std::move(v));
}

void monotonicity(Ledger& l) {
  // each family: a coefficient and a pointwise larger one
  struct Family {
    const char* name;
    CoefficientField low, high;
    int N;
  };
  const std::vector<Family> families = {
      {"constant", constant(0.5), constant(0.7), 1},
      {"sinusoid", CoefficientField::time_periodic(P::sinusoid(1.0, 0.2, 1.5)),
       CoefficientField::time_periodic(P::sinusoid(1.0, 0.5, 1.5)), 1},
      {"dip", CoefficientField::gaussian_dip(P::sinusoid(1.0, 1.0, 0.5), 1.5, 0.0, 1.0),
       CoefficientField::gaussian_dip(P::sinusoid(1.0, 1.0, 0.5), 0.5, 0.0, 1.0), 1},
      {"dip-N2", CoefficientField::gaussian_dip(P::constant(1.0, 0.8), 1.0, 1.0, 0.5),
       CoefficientField::gaussian_dip(P::constant(1.0, 0.9), 1.0, 1.0, 0.5), 2},
      {"tabulated", CoefficientField::tabulated(tabulated_grid(0.0)),
       CoefficientField::tabulated(tabulated_grid(0.3)), 1},
      {"negative-N3", constant(-0.5), CoefficientField::time_periodic(P::sinusoid(1.0, -0.4, 2.0)), 3},
  };
  const double radii[] = {0.5, 1.0, 2.0, 4.0};
  int violations = 0, comparisons = 0;
  for (const auto& f : families) {
    double prev_low = INFINITY;
    for (double R : radii) {
      const double lo = principal_eigenvalue(eigen(1.0, f.low, R, f.N)).lambda1;
      const double hi = principal_eigenvalue(eigen(1.0, f.high, R, f.N)).lambda1;
      comparisons += 2;
      if (!(lo < prev_low)) {
        ++violations;
        l.expect(false, std::string(f.name) + " not decreasing in R at R=" + std::to_string(R));
      }
      if (!(hi < lo)) {
        ++violations;
        l.expect(false, std::string(f.name) + " not decreasing in m at R=" + std::to_string(R));
      }
      prev_low = lo;
    }
  }
  l.note("families", families.size());
  l.note("comparisons", comparisons);
  l.note("violations", violations);
}

// --- 4 ----------------------------------------------------------------------

void apriori(Ledger& l) {
  struct Run {
    const char* name;
    ModelParams p;
    SolverConfig c;
  };
  for (const auto& r : {Run{"spreading", bench::spreading(), spread_config(50.0)},
                        Run{"vanishing", bench::vanishing(), vanish_config()}}) {
    const auto traj = run_simulation(r.p, r.c);
    l.expect(traj.termination == Termination::Completed,
             std::string(r.name) + " ended " + to_string(traj.termination) + ": " + traj.message);
    try {
      const auto b = verify_bounds(traj, r.p, 1e-6);
      l.note(r.name, b.records);
    } catch (const Error& e) {
      l.expect(false, std::string(r.name) + ": " + e.what());
    }
    std::size_t flat = 0, first = 0;
    for (std::size_t k = 1; k < traj.records.size(); ++k) {
      if (!(traj.records[k].h > traj.records[k - 1].h) && flat++ == 0) first = k;
    }
    if (flat > 0) {
      // report how small the increment had become when h stopped moving
      const auto& rec = traj.records[first];
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s: h flat at %zu records from t=%.4g (h'dt=%.3g, ulp(h)=%.3g)", r.name, flat,
                    rec.t, rec.dhdt * r.c.dt(r.p.T), std::nextafter(rec.h, INFINITY) - rec.h);
      l.expect(false, buf);
    }
  }
}

// --- 5 ----------------------------------------------------------------------

void ordering(Ledger& l) {
  const auto p = bench::spreading();
  auto c = spread_config(50.0);
  c.snapshot_every = 0;
  const auto coupled = run_simulation(p, c);
  const auto scalar = scalar_free_boundary(p, c);
  l.expect(coupled.termination == Termination::Completed && scalar.termination == Termination::Completed,
           "a run ended early");
  const auto rep = compare_runs(coupled, scalar, CompareMode::FrontOnly);
  l.note("shared", rep.shared_times);
  l.note("max_excess", rep.max_front_excess);
  l.expect(rep.shared_times == coupled.records.size(), "runs do not share every record time");
}

// --- 6 ----------------------------------------------------------------------

void dichotomy(Ledger& l) {
  const auto t0 = Clock::now();
  {
    const auto p = bench::vanishing();
    const auto c = vanish_config();
    const auto V = analysis_resident(p);
    const double h_star = effective_threshold_radius(p, V.field, 1.0, 0.9 * c.R_out);
    DichotomyMonitor monitor(p, c, h_star);
    // run the full horizon so the resident can be followed
    const auto traj = run_simulation(p, c, [&](const Trajectory& tr, const SimulationState& s) {
      monitor.observe(s.step_index, s.t, s.h, tr.records.back().u_max);
      return false;
    });
    const auto v = monitor.verdict();
    l.note("vanish", to_string(v.kind));
    l.expect(v.kind == Verdict::Vanishing, std::string("vanishing config gave ") + to_string(v.kind));
    l.expect(v.t_decided <= 200.0 + 1e-9, "vanishing decided after 200 periods");
    l.expect(traj.records.back().u_max < 1e-4, "sup u not below 1e-4");

    // v against the resident's periodic state on [0, 10] at period ends
    const double dr = traj.dr();
    std::vector<double> gaps;
    for (const auto& s : traj.snapshots) {
      double g = 0.0;
      for (int j = 0; j * dr <= 10.0 + 1e-12; ++j) {
        g = std::max(g, std::abs(s.v[static_cast<std::size_t>(j)] - V.field(s.t, j * dr)));
      }
      gaps.push_back(g);
    }
    // v0 = V, so the gap opens in the first period; from then on it must not
    // grow, up to the roundoff floor
    std::size_t peak = 0;
    for (std::size_t k = 0; k < gaps.size(); ++k) if (gaps[k] > gaps[peak]) peak = k;
    std::size_t rises = 0;
    for (std::size_t k = peak + 1; k < gaps.size(); ++k) {
      if (gaps[k] > gaps[k - 1] && gaps[k] > 1e-12) ++rises;
    }
    l.note("gap_peak_period", peak);
    l.note("gap_final", gaps.back());
    l.expect(peak <= 1, "gap peaked late, at period " + std::to_string(peak));
    l.expect(rises == 0, "gap rose in " + std::to_string(rises) + " periods");
    l.expect(gaps.back() < 1e-2, "final gap " + std::to_string(gaps.back()));
  }
  {
    const auto p = bench::spreading();
    const auto V = analysis_resident(p);
    const double h_star = effective_threshold_radius(p, V.field, 1.0, 90.0);
    const auto run = run_and_classify(p, spread_config(10.0), h_star, {}, 0);
    l.note("spread", to_string(run.verdict.kind));
    l.note("t_spread", run.verdict.t_decided);
    l.expect(run.verdict.kind == Verdict::Spreading && run.verdict.t_decided <= 10.0,
             "spreading config not classified within 10 periods");
  }
  {
    const auto p = bench::family();
    const auto cfg = family_config();
    const auto th = find_mu_star(p, cfg, 0.05, 5.0);
    l.note("mu*_lo", th.lower);
    l.note("mu*_hi", th.upper);
    l.expect(th.upper - th.lower < 0.05, "mu* interval width " + std::to_string(th.upper - th.lower));
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.05 + (5.0 - 0.05) * i / 9.0);
    const auto runs = verdict_scan(p, cfg, mu_dial(), grid, th.h_star);
    l.expect(verdicts_monotone(runs), "verdicts not monotone on the mu grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < th.lower && runs[i].verdict.kind == Verdict::Spreading) l.expect(false, "spreading below mu*");
      if (grid[i] > th.upper && runs[i].verdict.kind == Verdict::Vanishing) l.expect(false, "vanishing above mu*");
    }
  }
  l.expect(seconds_since(t0) < 600.0, "over 10 minutes");
}

// --- 7 ----------------------------------------------------------------------

void semiwave(Ledger& l) {
  struct Case {
    double mu, a, b, d;
  };
  for (const auto& c : {Case{1.0, 1.0, 1.0, 1.0}, Case{5.0, 0.8, 1.0, 1.0}, Case{5.0, 1.0, 1.0, 1.0}}) {
    const auto r = semiwave_k0(c.mu, P::constant(1.0, c.a), P::constant(1.0, c.b), c.d);
    const double k = oracle::semiwave_k0(c.mu, c.a, c.b, c.d);
    const double err = rel(r.mean_K0, k);
    l.note("err", err);
    l.expect(err <= 1e-3, "K0 off the shooting oracle by " + std::to_string(err));
    l.expect(r.mean_K0 > 0.0 && r.mean_K0 < 2.0 * std::sqrt(c.d * c.a), "mean K0 outside (0, 2 sqrt(d a))");
    l.expect(r.boundary_residual < 1e-5, "boundary residual " + std::to_string(r.boundary_residual));
  }
  // periodic input: only the bound and the residual apply
  const auto r = semiwave_k0(1.0, P::sinusoid(1.0, 1.0, 0.5), P::constant(1.0, 1.0), 1.0);
  l.expect(r.mean_K0 > 0.0 && r.mean_K0 < r.upper_bound, "periodic mean K0 outside its bound");
  l.expect(r.boundary_residual < 1e-5, "periodic boundary residual " + std::to_string(r.boundary_residual));
}

// --- 8 ----------------------------------------------------------------------

void speed(Ledger& l) {
  const auto p = bench::spreading();
  auto c = spread_config(100.0);
  c.snapshot_every = 0;
  const auto traj = run_simulation(p, c);
  l.expect(traj.termination == Termination::Completed, std::string("run ended ") + to_string(traj.termination));
  const auto fit = measure_speed(traj, 20.0);
  const auto b = speed_bounds(p);
  l.note("slope", fit.slope);
  l.note("lower", b.lower);
  l.note("upper", b.upper);
  l.expect(fit.slope >= 0.95 * b.lower && fit.slope <= 1.05 * b.upper, "slope outside the bounds");
}

// --- 9 ----------------------------------------------------------------------

void hygiene(Ledger& l) {
  {
    const auto p = bench::spreading();
    std::vector<double> s;
    for (int Ns : {128, 256, 512}) {
      // dt fine enough that no Ns needs CFL substeps, so the time error is
      // common to all three runs and cancels in the differences
      auto c = spread_config(5.0);
      c.Ns = Ns;
      c.steps_per_period = 1024;
      c.snapshot_every = 0;
      s.push_back(sup(run_simulation(p, c).final_state.u));
    }
    const double order = std::log2(std::abs(s[0] - s[1]) / std::abs(s[1] - s[2]));
    l.note("order", order);
    l.expect(order >= 1.5 && order <= 2.5, "Richardson order " + std::to_string(order));
  }
  {
    struct Run {
      const char* name;
      ModelParams p;
      SolverConfig c;
    };
    for (auto r : {Run{"dt_spread", bench::spreading(), spread_config(50.0)},
                   Run{"dt_vanish", bench::vanishing(), vanish_config()}}) {
      r.c.snapshot_every = 0;
      const double h1 = run_simulation(r.p, r.c).records.back().h;
      r.c.steps_per_period *= 2;
      const double h2 = run_simulation(r.p, r.c).records.back().h;
      l.note(r.name, rel(h1, h2));
      l.expect(rel(h1, h2) < 1e-2, std::string(r.name) + " moved final h by " + std::to_string(rel(h1, h2)));
    }
  }
  {
    // R_out doubled at fixed dr: the front of the spreading run
    const auto p = bench::spreading();
    auto c = spread_config(20.0);
    c.snapshot_every = 0;
    const double h1 = run_simulation(p, c).records.back().h;
    c.R_out *= 2.0;
    c.Nr *= 2;
    const double h2 = run_simulation(p, c).records.back().h;
    l.note("R_out_front", rel(h1, h2));
    l.expect(rel(h1, h2) < 1e-3, "doubling R_out moved final h by " + std::to_string(rel(h1, h2)));
  }
  {
    // R_out doubled at fixed dr: the resident's periodic state on the inner half
    const auto m = CoefficientField::gaussian_dip(P::sinusoid(1.0, 1.0, 0.5), 2.0, 0.0, 1.0);
    const auto base = solve_periodic_entire(1.0, m, constant(1.0), 1, 20.0, 1000);
    const auto wide = solve_periodic_entire(1.0, m, constant(1.0), 1, 40.0, 2000);
    double gap = 0.0;
    for (int k = 0; k < base.field.time_samples(); ++k) {
      for (int i = 0; i <= 500; ++i) gap = std::max(gap, std::abs(base.field.at(k, i) - wide.field.at(k, i)));
    }
    const double scaled = gap / base.field.max();
    l.note("R_out_entire", scaled);
    l.expect(scaled < 1e-3, "doubling R_out moved the resident by " + std::to_string(scaled));
  }
  {
    const auto a = P::sinusoid(1.0, 1.0, 0.5), b = P::constant(1.0, 1.0);
    const auto base = semiwave_k0(1.0, a, b, 1.0);
    SemiWaveOptions o;
    o.L = 2.0 * base.L;
    const auto wide = semiwave_k0(1.0, a, b, 1.0, o);
    l.note("L", rel(base.mean_K0, wide.mean_K0));
    l.expect(rel(base.mean_K0, wide.mean_K0) < 1e-3, "doubling L moved mean K0");
  }
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, "eigen anchors", eigen_anchors);
  failed += report(2, "threshold anchors", threshold_anchors);
  failed += report(3, "monotonicity", monotonicity);
  failed += report(4, "a priori bounds", apriori);
  failed += report(5, "comparison ordering", ordering);
  failed += report(6, "dichotomy", dichotomy);
  failed += report(7, "semi-wave", semiwave);
  failed += report(8, "speed bounds", speed);
  failed += report(9, "numerical hygiene", hygiene);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed;
}
