#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stefan/coefficient_field.hpp"

namespace stefan {

/// Radial initial profile. Invader profiles are written in the scaled
/// coordinate s = r/h0 so the same shape follows h0 through parameter sweeps.
struct RadialProfile {
  struct Cosine {  // amplitude * cos(pi*x/2) on x in [0, 1]
    double amplitude = 1.0;
  };
  struct Parabola {  // amplitude * (1 - x^2) on x in [0, 1]
    double amplitude = 1.0;
  };
  struct Constant {
    double value = 0.0;
  };
  struct Gaussian {  // base + amplitude * exp(-(x/width)^2)
    double base = 0.0;
    double amplitude = 1.0;
    double width = 1.0;
  };
  struct Samples {  // uniform samples on [0, extent]; clamped past extent
    double extent = 1.0;
    std::vector<double> values;
  };
  std::variant<Cosine, Parabola, Constant, Gaussian, Samples> shape{Constant{}};

  double operator()(double x) const;
  RadialProfile scaled(double factor) const;
};

struct InitialData {
  double h0 = 1.0;
  RadialProfile u0;  // in s = r/h0
  RadialProfile v0;  // in r

  double u(double r) const { return r >= h0 ? 0.0 : u0(r / h0); }
  double v(double r) const { return v0(r); }
  /// Invader samples on n+1 uniform nodes of [0, h0].
  std::vector<double> u_samples(int n) const;
  /// sup |u0| and sup |u0| + sup |u0'| (from fine central differences).
  double u_sup() const;
  double u_c1_norm() const;
  double v_sup(double r_max) const;

  /// Throws InvalidArgument when the data violate the admissibility conditions.
  void validate(double r_max) const;
};

struct ModelParams {
  double d1 = 1.0;
  double d2 = 1.0;
  double mu = 1.0;
  int N = 1;
  double T = 1.0;
  CoefficientField m1, m2, b1, b2, c1, c2;
  InitialData init;

  double h0() const { return init.h0; }
  void validate() const;
};

/// Sampling densities used by the hypothesis checks.
struct SamplingGrid {
  int time_samples = 64;
  int space_samples = 256;
  double r_max = 20.0;
};

struct Witness {
  double t = 0.0;
  double r = 0.0;
  double value = 0.0;
};

struct ClauseResult {
  std::string name;
  bool pass = true;
  std::optional<Witness> witness;
  std::string detail;
};

struct HypothesisReport {
  bool pass = true;
  std::vector<ClauseResult> clauses;
  void add(ClauseResult clause) {
    pass = pass && clause.pass;
    clauses.push_back(std::move(clause));
  }
};

/// Regularity/envelope hypothesis: b_i, c_i positive, inside their declared
/// envelopes, and every coefficient T-periodic. Periodicity is probed on a
/// 64 x 64 (t, r) grid; containment and positivity on the full sampling grid.
HypothesisReport check_H1(const ModelParams& params, const SamplingGrid& grid = {});

struct H2Result {
  double liminf = 0.0;
  double limsup = 0.0;
  bool pass = false;
  std::vector<double> liminf_by_probe;
  std::vector<double> limsup_by_probe;
};

/// Positivity at infinity, estimated at finite probe radii. Throws
/// NonStabilized when the last three probes disagree by more than 1 %.
H2Result check_H2(const CoefficientField& field, const std::vector<double>& probe_radii,
                  double threshold = 1e-6, int time_samples = 64);

/// Probe radii 10*h0 * 2^k, k = 0..3.
std::vector<double> default_probe_radii(double h0);

enum class Environment { Strong, Weak, Neither };
const char* to_string(Environment env);

Environment classify_environment(const ModelParams& params, const SamplingGrid& grid = {});

}  // namespace stefan
