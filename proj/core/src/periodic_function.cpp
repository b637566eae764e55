#include "stefan/periodic_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stefan/error.hpp"

namespace stefan {

double wrap_time(double t, double period) {
  double w = std::fmod(t, period);
  if (w < 0.0) w += period;
  if (w >= period) w = 0.0;
  return w;
}

PeriodicScalarFunction::PeriodicScalarFunction(double period, Constant rule)
    : period_(period), rule_(rule) {
  require(period > 0.0, "period must be positive");
}

PeriodicScalarFunction::PeriodicScalarFunction(double period, Sinusoid rule)
    : period_(period), rule_(rule) {
  require(period > 0.0, "period must be positive");
}

PeriodicScalarFunction::PeriodicScalarFunction(double period, Tabulated rule)
    : period_(period), rule_(std::move(rule)) {
  require(period > 0.0, "period must be positive");
  require(std::get<Tabulated>(rule_).samples.size() >= 4,
          "tabulated periodic function needs at least 4 samples per period");
}

double PeriodicScalarFunction::operator()(double t) const {
  struct Eval {
    double t, period;
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Sinusoid& s) const {
      const double phase = 2.0 * std::numbers::pi * wrap_time(t, period) / period + s.phase;
      return s.offset + s.amplitude * std::sin(phase);
    }
    double operator()(const Tabulated& tab) const {
      const auto n = tab.samples.size();
      const double x = wrap_time(t, period) / period * static_cast<double>(n);
      auto k = static_cast<std::size_t>(x);
      if (k >= n) k = n - 1;
      const double w = x - static_cast<double>(k);
      const double a = tab.samples[k];
      const double b = tab.samples[(k + 1) % n];
      return a + w * (b - a);
    }
  };
  return std::visit(Eval{t, period_}, rule_);
}

double PeriodicScalarFunction::mean() const {
  struct Mean {
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Sinusoid& s) const { return s.offset; }
    double operator()(const Tabulated& tab) const {
      // periodic trapezoid is exact for the piecewise linear interpolant
      double sum = 0.0;
      for (double v : tab.samples) sum += v;
      return sum / static_cast<double>(tab.samples.size());
    }
  };
  return std::visit(Mean{}, rule_);
}

double PeriodicScalarFunction::min() const {
  struct Min {
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Sinusoid& s) const { return s.offset - std::abs(s.amplitude); }
    double operator()(const Tabulated& tab) const {
      return *std::min_element(tab.samples.begin(), tab.samples.end());
    }
  };
  return std::visit(Min{}, rule_);
}

double PeriodicScalarFunction::max() const {
  struct Max {
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Sinusoid& s) const { return s.offset + std::abs(s.amplitude); }
    double operator()(const Tabulated& tab) const {
      return *std::max_element(tab.samples.begin(), tab.samples.end());
    }
  };
  return std::visit(Max{}, rule_);
}

bool PeriodicScalarFunction::is_constant() const {
  if (std::holds_alternative<Constant>(rule_)) return true;
  if (const auto* s = std::get_if<Sinusoid>(&rule_)) return s->amplitude == 0.0;
  const auto& v = std::get<Tabulated>(rule_).samples;
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace stefan
