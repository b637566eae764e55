#pragma once

#include <optional>
#include <vector>

#include "stefan/model.hpp"
#include "stefan/radial_field.hpp"

namespace stefan {

struct EntireOptions {
  int steps_per_period = 256;  // also the number of stored time rows
  int max_periods = 2000;
  double tolerance = 1e-9;  // sup-norm change between successive t = 0 snapshots
  /// Start of the period map on r_i = i*R_out/grid; flat plateau when empty.
  std::vector<double> initial;
};

struct EntireSolution {
  RadialPeriodicField field;
  int periods = 0;
  double residual = 0.0;
  double initial_level = 0.0;
};

/// T-periodic positive solution of w_t - d Lap w = w (growth - b w) on
/// [0, R_out] with zero flux at both ends, as the fixed point of the discrete
/// period map. Throws NonConvergence after max_periods and Degenerate when the
/// iterate collapses below 1e-12.
EntireSolution solve_periodic_entire(double d, const CoefficientField& growth,
                                     const CoefficientField& b, int N, double r_out, int grid,
                                     const EntireOptions& options = {});

/// max(20, 10 * width) over the gaussian profiles of the given fields.
double default_entire_radius(std::initializer_list<const CoefficientField*> fields);

struct AsymptoticBoundsReport {
  bool pass = false;
  double epsilon = 0.0;
  double lower_margin = 0.0;  // min of field - (V_star - eps) over the tail
  double upper_margin = 0.0;  // min of (V_upper + eps) - field over the tail
  Witness worst;              // tail sample with the smallest margin
};

/// The tail (outer 20 % of the grid) must lie in [V_star - eps, V_upper + eps]
/// with eps = 0.02 * sup V_upper.
AsymptoticBoundsReport check_asymptotic_bounds(const RadialPeriodicField& field,
                                               const PeriodicScalarFunction& V_star,
                                               const PeriodicScalarFunction& V_upper);

/// m1 - inflation * c1 * V with asymptotic envelopes
///   liminf: m1_* - inflation * c1^* V^*,  limsup: m1^* - inflation * c1_* V_*,
/// where V_*, V^* are the resident's logistic envelopes.
CoefficientField effective_u_growth(const ModelParams& params, const RadialPeriodicField& V,
                                    double inflation);

/// Resident steady state: solve_periodic_entire with (d2, m2, b2).
EntireSolution resident_steady_state(const ModelParams& params, double r_out, int grid,
                                     const EntireOptions& options = {});

}  // namespace stefan
