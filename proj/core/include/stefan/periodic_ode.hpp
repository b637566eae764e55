#pragma once

#include "stefan/model.hpp"
#include "stefan/radial_field.hpp"

namespace stefan {

struct PeriodicLogisticSolution {
  PeriodicScalarFunction V;  // tabulated on `nodes` samples per period
  double mean_a = 0.0;
  double residual = 0.0;            // sup |V' - V(a - bV)| on the node grid
  double periodicity_defect = 0.0;  // |V(0) - V(T)|
  int nodes = 0;
};

/// Unique positive T-periodic solution of V' = V (a(t) - b(t) V), evaluated
/// through the Bernoulli closed form
///   V(t) = e^{A(t)} / (C + int_0^t b e^A),  A(t) = int_0^t a,
///   C = int_0^T b e^A / (e^{A(T)} - 1),
/// with cumulative Simpson quadrature. The node count is doubled until the
/// fourth-order finite-difference residual drops below 1e-8.
/// Throws NoPositivePeriodicSolution when the mean of a is not positive.
PeriodicLogisticSolution solve_periodic_logistic(const PeriodicScalarFunction& a,
                                                 const PeriodicScalarFunction& b, int nodes = 512);

/// Spatially uniform envelopes of the resident's steady state: V_lower solves
/// the logistic law with (liminf m2, upper b2), V_upper with (limsup m2, lower b2).
struct ResidentEnvelopes {
  PeriodicLogisticSolution lower;
  PeriodicLogisticSolution upper;
};
ResidentEnvelopes resident_envelopes(const ModelParams& params);

struct EnvelopeConstants {
  double K = 0.0;
  double H = 0.0;
  double min_b2 = 0.0;
  double min_V = 0.0;
  double min_V0 = 0.0;  // min over r of V(0, r)
  double v0_sup = 0.0;
  /// The minimum of V(0, .) sits on the outermost grid node, so the truncated
  /// grid may overestimate the infimum over [0, infinity).
  bool truncation_flag = false;
};

/// K = (1/2) min b2 * min V and 1 + H = ||v0||_inf / min_r V(0, r). H is
/// clamped at 0 when v0 already lies below V(0, .). Throws DegenerateV when V
/// is not strictly positive.
EnvelopeConstants envelope_constants(const ModelParams& params, const RadialPeriodicField& V);

/// Upper barrier for the resident: (1 + H e^{-K t}) V(t mod T, r).
double vbar(double t, double r, const RadialPeriodicField& V, const EnvelopeConstants& constants);

struct H3Result {
  bool pass = false;
  double margin = 0.0;  // min over t of m1_lower(t) - (1 + H) c1_upper(t) V_upper(t)
  double argmin_t = 0.0;
};

H3Result check_H3(const ModelParams& params, const PeriodicScalarFunction& V_upper,
                  const EnvelopeConstants& constants, int time_samples = 512);

}  // namespace stefan
