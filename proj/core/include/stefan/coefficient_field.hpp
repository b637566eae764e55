#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>

#include "stefan/periodic_function.hpp"
#include "stefan/radial_field.hpp"

namespace stefan {

/// A T-periodic, radially symmetric coefficient c(t, r) together with its
/// envelopes lower(t) <= c(t, r) <= upper(t) and, when known, its liminf and
/// limsup as r -> infinity.
///
/// Profiles:
///   - GaussianDip: base(t) - amplitude * exp(-(r - center)^2 / width^2). A zero
///     amplitude gives the constant and purely time-periodic families.
///   - Tabulated: samples on a (t, r) grid, bilinear and periodic in t; radii past
///     the grid take the outermost value.
///   - Composite: growth - inflation * competition * density, used for the
///     effective growth rate of the invader against the resident's steady state.
class CoefficientField {
 public:
  struct GaussianDip {
    PeriodicScalarFunction base;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
  };
  struct Tabulated {
    RadialPeriodicField grid;
  };
  struct Composite {
    std::shared_ptr<const CoefficientField> growth;
    std::shared_ptr<const CoefficientField> competition;
    std::shared_ptr<const RadialPeriodicField> density;
    double inflation = 1.0;
  };
  using Profile = std::variant<GaussianDip, Tabulated, Composite>;

  CoefficientField() : CoefficientField(constant(1.0, 0.0)) {}
  explicit CoefficientField(Profile profile);

  static CoefficientField constant(double period, double value);
  static CoefficientField time_periodic(PeriodicScalarFunction base);
  static CoefficientField gaussian_dip(PeriodicScalarFunction base, double amplitude,
                                       double center, double width);
  static CoefficientField tabulated(RadialPeriodicField grid);
  static CoefficientField composite(CoefficientField growth, CoefficientField competition,
                                    RadialPeriodicField density, double inflation);

  double operator()(double t, double r) const;
  /// out[i] = c(t, r[i]).
  void sample(double t, std::span<const double> r, std::span<double> out) const;

  double period() const { return period_; }
  bool space_constant() const;
  bool time_constant() const;
  /// (1/T) * integral over one period of c(t, r).
  double time_mean(double r) const;

  const PeriodicScalarFunction& lower() const { return lower_; }
  const PeriodicScalarFunction& upper() const { return upper_; }
  const std::optional<PeriodicScalarFunction>& asymptotic_liminf() const { return liminf_; }
  const std::optional<PeriodicScalarFunction>& asymptotic_limsup() const { return limsup_; }
  /// Asymptotic bounds when known, declared envelopes otherwise.
  const PeriodicScalarFunction& liminf_or_lower() const { return liminf_ ? *liminf_ : lower_; }
  const PeriodicScalarFunction& limsup_or_upper() const { return limsup_ ? *limsup_ : upper_; }

  /// sup over t of max(|lower(t)|, |upper(t)|); an upper bound for ||c||_inf.
  double sup_abs() const;

  CoefficientField with_envelopes(PeriodicScalarFunction lower, PeriodicScalarFunction upper) const;
  CoefficientField with_asymptotics(PeriodicScalarFunction liminf, PeriodicScalarFunction limsup) const;

  const Profile& profile() const { return profile_; }

 private:
  Profile profile_;
  double period_ = 1.0;
  PeriodicScalarFunction lower_;
  PeriodicScalarFunction upper_;
  std::optional<PeriodicScalarFunction> liminf_;
  std::optional<PeriodicScalarFunction> limsup_;
};

/// Returns f + shift with the same rule kind.
PeriodicScalarFunction shifted(const PeriodicScalarFunction& f, double shift);

}  // namespace stefan
