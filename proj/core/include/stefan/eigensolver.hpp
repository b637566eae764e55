#pragma once

#include <optional>
#include <vector>

#include "stefan/coefficient_field.hpp"

namespace stefan {

/// Periodic-parabolic Dirichlet eigenproblem on the ball B_R:
///   phi_t - d Lap phi = m(t, r) phi + lambda phi,  phi(t, R) = 0,  phi(0) = phi(T).
struct EigenProblem {
  double d = 1.0;
  CoefficientField m;
  double R = 1.0;
  double T = 1.0;
  int N = 1;
  int grid = 256;              // radial intervals
  int steps_per_period = 256;  // dt = T / steps_per_period
  int block = 6;               // subspace size of the period-map iteration
  int max_iterations = 500;    // periods
  double tolerance = 1e-8;     // relative change of the multiplier

  void validate() const;
};

struct EigenResult {
  double lambda1 = 0.0;
  double multiplier = 0.0;   // Floquet multiplier of the period map
  std::vector<double> phi0;  // eigenfunction at t = 0 on r_i = i*R/grid, sup = 1
  double R = 1.0;
  int iterations = 0;
  double rel_change = 0.0;
};

/// lambda1 = -ln(rho)/T with rho the spectral radius of the discrete period
/// map (Strang split: exact reaction factors, TR-BDF2 diffusion). rho comes
/// from subspace iteration with Rayleigh-Ritz on `block` vectors; with block 1
/// this is plain power iteration with per-period renormalization.
/// Throws NonConvergence when the multiplier has not settled after
/// max_iterations periods.
EigenResult principal_eigenvalue(const EigenProblem& prob);

/// Shared numerical settings for the threshold searches.
struct EigenSettings {
  int grid = 256;
  int steps_per_period = 256;
  int block = 6;
  int max_iterations = 500;
  double tolerance = 1e-8;

  EigenProblem problem(double d, const CoefficientField& m, double R, double T, int N) const {
    return {d, m, R, T, N, grid, steps_per_period, block, max_iterations, tolerance};
  }
};

struct RadiusThreshold {
  bool bounded = false;  // false: lambda1 > 0 up to search_max ("h* = infinity")
  double value = 0.0;    // h*, midpoint of the final bracket
  double lower = 0.0;    // lambda1(lower) > 0
  double upper = 0.0;    // lambda1(upper) <= 0
  int evaluations = 0;
};

/// Critical radius h*(d, m, T): lambda1(d, m, R, T) <= 0 exactly when R >= h*.
/// Bracket expansion by doubling/halving, then bisection to relative width
/// `rel_width`, relying on the strict decrease of lambda1 in R.
RadiusThreshold threshold_radius(double d, const CoefficientField& m, double T, int N,
                                 double search_max, const EigenSettings& settings = {},
                                 double rel_width = 1e-4);

struct DiffusionSample {
  double d = 0.0;
  double lambda1 = 0.0;
};

struct DiffusionThreshold {
  bool applicable = true;
  bool certified = true;  // false when the scan never left the sign region
  double value = 0.0;
  double lambda_at_value = 0.0;  // certificate, ~0 at a refined crossing
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<DiffusionSample> samples;  // the log-grid scan
};

struct DiffusionScan {
  double d_min = 1e-4;
  int points_per_decade = 8;
  double rel_width = 1e-4;
};

/// d^*: beyond it every tested d has lambda1 > 0. The log-grid scan locates the
/// last sampled d with lambda1 <= 0; the crossing to its right is refined by
/// bisection. Throws NoSignChange when lambda1 > 0 on the whole grid.
DiffusionThreshold threshold_diffusion_fast(const CoefficientField& m, double R, double T, int N,
                                            double search_max, const EigenSettings& settings = {},
                                            const DiffusionScan& scan = {});

/// d_*: every tested d in (0, d_*] has lambda1 <= 0. Never bisected across the
/// whole range since lambda1 need not be monotone in d: the value is the first
/// sign change of the log-grid scan from below, refined inside that cell.
/// Not applicable when max over B_R of the time mean of m is <= 0.
DiffusionThreshold threshold_diffusion_slow(const CoefficientField& m, double R, double T, int N,
                                            double search_max, const EigenSettings& settings = {},
                                            const DiffusionScan& scan = {});

/// max over r in [0, R] of (1/T) int_0^T m(t, r) dt, sampled on `samples` radii.
double max_time_mean(const CoefficientField& m, double R, int samples = 512);

}  // namespace stefan
