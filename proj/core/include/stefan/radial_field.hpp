#pragma once

#include <span>
#include <vector>

namespace stefan {

/// Samples of a T-periodic radial function on a uniform (time x radius) grid.
/// Row k holds the profile at t = k*T/time_samples on radii i*R_out/intervals.
/// Evaluation is bilinear, periodic in t, and clamps r to [0, R_out].
class RadialPeriodicField {
 public:
  RadialPeriodicField() = default;
  RadialPeriodicField(double period, double r_out, int time_samples, int intervals,
                      std::vector<double> values);

  double operator()(double t, double r) const;

  double period() const { return period_; }
  double r_out() const { return r_out_; }
  int time_samples() const { return nt_; }
  int intervals() const { return nr_; }
  double dr() const { return r_out_ / nr_; }
  double radius(int i) const { return r_out_ * i / nr_; }
  double time(int k) const { return period_ * k / nt_; }

  std::span<const double> row(int k) const;
  double at(int k, int i) const { return values_[static_cast<std::size_t>(k) * (nr_ + 1) + i]; }

  double min() const;
  double max() const;
  double row_min(int k) const;
  double row_max(int k) const;

  /// Period-map defect recorded by the producer (sup-norm change over the last period).
  double residual = 0.0;

 private:
  double period_ = 1.0;
  double r_out_ = 1.0;
  int nt_ = 0;
  int nr_ = 0;
  std::vector<double> values_;
};

}  // namespace stefan
