#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "stefan/eigensolver.hpp"
#include "stefan/entire_solutions.hpp"
#include "stefan/fbsolver.hpp"

namespace stefan {

enum class Verdict { Spreading, Vanishing, Inconclusive };
const char* to_string(Verdict v);

struct ClassifyOptions {
  double tol_u_factor = 1e-4;  // tol_u = factor * C1
  double tol_h_factor = 1e-5;  // tol_h = factor * h0
  int stall_periods = 5;       // consecutive periods of decay and stall
  int min_periods = 20;        // no vanishing verdict before this many periods
};

struct DichotomyEvidence {
  bool radius_crossed = false;
  double t_crossed = 0.0;
  std::vector<double> sup_u;  // at the end of each period
  std::vector<double> dh;     // front advance over each period
  int stall_run = 0;          // current run of periods meeting both vanishing tests
  double tol_u = 0.0;
  double tol_h = 0.0;
};

struct DichotomyVerdict {
  Verdict kind = Verdict::Inconclusive;
  DichotomyEvidence evidence;
  double h_star_used = 0.0;  // infinity when the effective field never certifies
  double t_decided = 0.0;
  std::string note;
};

/// Critical radius of the invader against the resident's steady state:
/// h*(d1, m1 - inflation * c1 V, T). Infinity when unbounded below search_max.
double effective_threshold_radius(const ModelParams& params, const RadialPeriodicField& V,
                                  double inflation, double search_max,
                                  const EigenSettings& settings = {});

/// Incremental classifier, usable as a StepHook: Spreading as soon as
/// h > h_star; Vanishing once sup u < tol_u and the per-period front advance
/// is below tol_h for stall_periods consecutive periods (not before
/// min_periods).
class DichotomyMonitor {
 public:
  DichotomyMonitor(const ModelParams& params, const SolverConfig& config, double h_star,
                   const ClassifyOptions& options = {});
  /// Returns true once a verdict is reached.
  bool observe(const SimulationState& state);
  bool observe(long step_index, double t, double h, double sup_u);
  bool decided() const { return verdict_.kind != Verdict::Inconclusive; }
  /// Inconclusive verdicts carry a recommendation in `note`.
  DichotomyVerdict verdict() const;
  StepHook hook();

 private:
  ClassifyOptions options_;
  int steps_per_period_;
  double last_h_;
  DichotomyVerdict verdict_;
};

/// Post-hoc classification of a finished trajectory.
DichotomyVerdict classify(const Trajectory& traj, const ModelParams& params, double h_star,
                          const ClassifyOptions& options = {});
DichotomyVerdict classify(const Trajectory& traj, const ModelParams& params,
                          const RadialPeriodicField& V, const ClassifyOptions& options = {},
                          const EigenSettings& settings = {});

/// One predicate evaluation: simulate with the monitor attached. Inconclusive
/// runs are repeated with doubled t_end up to max_doublings times.
struct ClassifiedRun {
  DichotomyVerdict verdict;
  double t_end = 0.0;
  double h_final = 0.0;
  Termination termination = Termination::Completed;
};
ClassifiedRun run_and_classify(const ModelParams& params, const SolverConfig& config, double h_star,
                               const ClassifyOptions& options = {}, int max_doublings = 2);

/// A parameter dial: returns params with the dialled value applied.
using Dial = std::function<ModelParams(const ModelParams&, double)>;
Dial mu_dial();
Dial h0_dial();
Dial d1_dial();
/// u0 = eps * theta, theta the invader profile of the base params.
Dial eps_dial();

struct ThresholdEvaluation {
  double value = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double t_end = 0.0;
};

struct ThresholdInterval {
  double lower = 0.0;  // largest value seen vanishing
  double upper = 0.0;  // smallest value seen spreading
  bool degenerate_zero = false;  // h0 >= h*(d1, m1 - (1+H) c1 V): threshold is 0
  bool widened = false;          // an unresolved midpoint stopped the bisection
  double h_star_inflated = 0.0;
  double h_star = 0.0;
  std::vector<ThresholdEvaluation> evaluations;
};

struct ThresholdOptions {
  double rel_width = 1e-2;  // stop at width rel_width * bracket
  int max_doublings = 2;
  ClassifyOptions classify;
  EigenSettings eigen;
  double entire_r_out = 0.0;  // 0: default_entire_radius
  int entire_grid = 0;        // 0: spacing 0.02
};

/// Resident steady state on the default truncation used by the analyses.
EntireSolution analysis_resident(const ModelParams& params, const ThresholdOptions& options = {});

/// Sharp threshold of a dial by bisection on the verdict. The low end must
/// vanish and the high end spread (NoBracket otherwise), unless the
/// degenerate case h0 >= h*(d1, m1 - (1+H) c1 V) applies.
ThresholdInterval find_threshold(const ModelParams& params, const SolverConfig& config,
                                 const Dial& dial, double lo, double hi,
                                 const ThresholdOptions& options = {});
ThresholdInterval find_mu_star(const ModelParams& params, const SolverConfig& config, double lo,
                               double hi, const ThresholdOptions& options = {});
ThresholdInterval find_eps_star(const ModelParams& params, const SolverConfig& config, double lo,
                                double hi, const ThresholdOptions& options = {});

/// Verdicts on a list of dial values, evaluated concurrently, in input order.
std::vector<ClassifiedRun> verdict_scan(const ModelParams& params, const SolverConfig& config,
                                        const Dial& dial, const std::vector<double>& values,
                                        double h_star, const ClassifyOptions& options = {},
                                        int max_doublings = 2);

/// No Vanishing verdict above a Spreading one (values ascending).
bool verdicts_monotone(const std::vector<ClassifiedRun>& runs);

struct SemiWaveOptions {
  double dr = 0.02;
  double L = 0.0;  // 0: 40 sqrt(d / mean a)
  int steps_per_period = 128;
  double relaxation = 0.5;
  double tolerance = 1e-6;
  int max_iterations = 500;
};

struct SemiWaveResult {
  PeriodicScalarFunction K0;  // on the time grid of the solver
  RadialPeriodicField U;      // U(t, r) on [0, L]
  PeriodicScalarFunction V;   // the logistic limit at r = L
  double mean_K0 = 0.0;
  double upper_bound = 0.0;  // 2 sqrt(d mean a)
  double boundary_residual = 0.0;  // sup_t |mu U_r(t, 0) - K0(t)|
  double tail_gap = 0.0;           // sup_t |U(t, L) - V(t)| relative to sup V on the last node before L
  double L = 0.0;
  int iterations = 0;
};

/// Self-consistent advection K0 of the periodic semi-wave
///   U_t - d U_rr + K(t) U_r = U (a - b U),  U(t, 0) = 0,  U(t, L) = V(t),
///   mu U_r(t, 0) = K(t),
/// by relaxed fixed-point iteration on K with each inner problem solved by
/// period-map iteration. Throws NoSemiWave when mean a <= 0 or the iterate
/// leaves the existence region, NonConvergence after max_iterations.
SemiWaveResult semiwave_k0(double mu, const PeriodicScalarFunction& a,
                           const PeriodicScalarFunction& b, double d,
                           const SemiWaveOptions& options = {});

struct SpeedBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_flagged = false;  // lower composite has no semi-wave; lower reported as 0
  std::string note;
  SemiWaveResult lower_wave, upper_wave;
};

/// lower = mean K0(mu, m1_* - c1^* V^*, b1^*), upper = mean K0(mu, m1^*, b1_*).
SpeedBounds speed_bounds(const ModelParams& params, const SemiWaveOptions& options = {});

struct SpeedFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square
  double window = 0.0;    // periods
  std::size_t samples = 0;
};

/// Least-squares slope of h(t) over the last `window` periods. Throws
/// InsufficientData when the trajectory spans fewer than 3 windows.
SpeedFit measure_speed(const Trajectory& traj, double window);

}  // namespace stefan
