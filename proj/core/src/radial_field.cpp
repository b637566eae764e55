#include "stefan/radial_field.hpp"

#include <algorithm>
#include <cmath>

#include "stefan/error.hpp"
#include "stefan/periodic_function.hpp"

namespace stefan {

RadialPeriodicField::RadialPeriodicField(double period, double r_out, int time_samples,
                                         int intervals, std::vector<double> values)
    : period_(period), r_out_(r_out), nt_(time_samples), nr_(intervals), values_(std::move(values)) {
  require(period > 0.0 && r_out > 0.0, "field period and radius must be positive");
  require(time_samples >= 1 && intervals >= 1, "field grid must be non-empty");
  require(values_.size() == static_cast<std::size_t>(time_samples) * (intervals + 1),
          "field sample count does not match grid");
}

std::span<const double> RadialPeriodicField::row(int k) const {
  return {values_.data() + static_cast<std::size_t>(k) * (nr_ + 1),
          static_cast<std::size_t>(nr_ + 1)};
}

double RadialPeriodicField::operator()(double t, double r) const {
  const double x = std::clamp(r, 0.0, r_out_) / r_out_ * nr_;
  int i = std::min(static_cast<int>(x), nr_ - 1);
  const double wr = x - i;

  const double y = wrap_time(t, period_) / period_ * nt_;
  int k = std::min(static_cast<int>(y), nt_ - 1);
  const double wt = y - k;
  const int k1 = (k + 1) % nt_;

  const double a = at(k, i) + wr * (at(k, i + 1) - at(k, i));
  const double b = at(k1, i) + wr * (at(k1, i + 1) - at(k1, i));
  return a + wt * (b - a);
}

double RadialPeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RadialPeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double RadialPeriodicField::row_min(int k) const {
  auto r = row(k);
  return *std::min_element(r.begin(), r.end());
}

double RadialPeriodicField::row_max(int k) const {
  auto r = row(k);
  return *std::max_element(r.begin(), r.end());
}

}  // namespace stefan
