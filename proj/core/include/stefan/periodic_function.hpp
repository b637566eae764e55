#pragma once

#include <span>
#include <variant>
#include <vector>

namespace stefan {

/// A T-periodic scalar function of time. Three rules are supported: constant,
/// sinusoid c0 + c1*sin(2*pi*t/T + phase), and uniform samples on [0, T) with
/// periodic linear interpolation.
class PeriodicScalarFunction {
 public:
  struct Constant {
    double value = 0.0;
  };
  struct Sinusoid {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
  };
  struct Tabulated {
    std::vector<double> samples;  // samples[k] = f(k*T/n), k < n
  };

  PeriodicScalarFunction() = default;
  PeriodicScalarFunction(double period, Constant rule);
  PeriodicScalarFunction(double period, Sinusoid rule);
  PeriodicScalarFunction(double period, Tabulated rule);

  static PeriodicScalarFunction constant(double period, double value) {
    return {period, Constant{value}};
  }
  static PeriodicScalarFunction sinusoid(double period, double offset, double amplitude,
                                         double phase = 0.0) {
    return {period, Sinusoid{offset, amplitude, phase}};
  }
  static PeriodicScalarFunction tabulated(double period, std::vector<double> samples) {
    return {period, Tabulated{std::move(samples)}};
  }
  /// Samples f on n uniform nodes of [0, T) and returns the tabulated rule.
  template <class F>
  static PeriodicScalarFunction sample(double period, int n, F&& f) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = f(period * k / n);
    return tabulated(period, std::move(s));
  }

  double operator()(double t) const;

  double period() const { return period_; }
  /// (1/T) * integral over one period; exact for every rule.
  double mean() const;
  double min() const;
  double max() const;
  bool is_constant() const;
  const auto& rule() const { return rule_; }

 private:
  double period_ = 1.0;
  std::variant<Constant, Sinusoid, Tabulated> rule_{Constant{}};
};

/// Reduces t into [0, period).
double wrap_time(double t, double period);

}  // namespace stefan
