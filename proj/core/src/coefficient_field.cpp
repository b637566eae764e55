#include "stefan/coefficient_field.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stefan/error.hpp"

namespace stefan {

PeriodicScalarFunction shifted(const PeriodicScalarFunction& f, double shift) {
  using F = PeriodicScalarFunction;
  if (const auto* c = std::get_if<F::Constant>(&f.rule())) return F::constant(f.period(), c->value + shift);
  if (const auto* s = std::get_if<F::Sinusoid>(&f.rule()))
    return F::sinusoid(f.period(), s->offset + shift, s->amplitude, s->phase);
  auto samples = std::get<F::Tabulated>(f.rule()).samples;
  for (double& v : samples) v += shift;
  return F::tabulated(f.period(), std::move(samples));
}

namespace {

double dip_shape(const CoefficientField::GaussianDip& g, double r) {
  const double x = (r - g.center) / g.width;
  return std::exp(-x * x);
}

constexpr int kCompositeTimeSamples = 64;

}  // namespace

CoefficientField::CoefficientField(Profile profile) : profile_(std::move(profile)) {
  if (auto* g = std::get_if<GaussianDip>(&profile_)) {
    require(g->width > 0.0, "gaussian dip width must be positive");
    period_ = g->base.period();
    // the dip attains its extreme over r >= 0 at r = max(center, 0)
    const double peak = g->amplitude * dip_shape(*g, std::max(g->center, 0.0));
    lower_ = shifted(g->base, -std::max(peak, 0.0));
    upper_ = shifted(g->base, std::max(-peak, 0.0));
    liminf_ = g->base;
    limsup_ = g->base;
  } else if (auto* tab = std::get_if<Tabulated>(&profile_)) {
    const auto& grid = tab->grid;
    period_ = grid.period();
    const int nt = grid.time_samples();
    std::vector<double> lo(static_cast<std::size_t>(nt)), hi(lo.size()), tail(lo.size());
    for (int k = 0; k < nt; ++k) {
      lo[static_cast<std::size_t>(k)] = grid.row_min(k);
      hi[static_cast<std::size_t>(k)] = grid.row_max(k);
      tail[static_cast<std::size_t>(k)] = grid.at(k, grid.intervals());
    }
    if (nt >= 4) {
      lower_ = PeriodicScalarFunction::tabulated(period_, std::move(lo));
      upper_ = PeriodicScalarFunction::tabulated(period_, std::move(hi));
      liminf_ = PeriodicScalarFunction::tabulated(period_, tail);
      limsup_ = PeriodicScalarFunction::tabulated(period_, std::move(tail));
    } else {
      // a single time row is time-constant
      require(nt == 1, "tabulated coefficient needs 1 or at least 4 time samples");
      lower_ = PeriodicScalarFunction::constant(period_, lo[0]);
      upper_ = PeriodicScalarFunction::constant(period_, hi[0]);
      liminf_ = PeriodicScalarFunction::constant(period_, tail[0]);
      limsup_ = liminf_;
    }
  } else {
    auto& c = std::get<Composite>(profile_);
    require(c.growth && c.competition && c.density, "composite field needs all parts");
    period_ = c.growth->period();
    const auto& v = *c.density;
    // Rows on a fine (t, r) grid reaching 4 R_out, where the density is
    // clamped and the gaussian parts have decayed. Each node widens by the
    // neighbouring rows and by the largest second difference in t and r, so
    // the linear interpolant bounds the field between samples as well.
    const int nt = std::max(kCompositeTimeSamples * 4, v.time_samples());
    const int nr = 4 * v.intervals();
    std::vector<double> radii(static_cast<std::size_t>(nr + 1));
    for (int i = 0; i <= nr; ++i) radii[static_cast<std::size_t>(i)] = 4.0 * v.r_out() * i / nr;
    std::vector<double> grid(static_cast<std::size_t>(nt) * radii.size());
    const auto width = radii.size();
    for (int k = 0; k < nt; ++k) {
      sample(period_ * k / nt, radii, std::span(grid).subspan(static_cast<std::size_t>(k) * width, width));
    }
    auto at = [&](int k, std::size_t i) {
      return grid[static_cast<std::size_t>(((k % nt) + nt) % nt) * width + i];
    };
    std::vector<double> lo(static_cast<std::size_t>(nt)), hi(lo.size());
    for (int k = 0; k < nt; ++k) {
      double mn = INFINITY, mx = -INFINITY, curve = 0.0;
      for (std::size_t i = 0; i < width; ++i) {
        for (int dk = -1; dk <= 1; ++dk) {
          mn = std::min(mn, at(k + dk, i));
          mx = std::max(mx, at(k + dk, i));
        }
        curve = std::max(curve, std::abs(at(k + 1, i) - 2.0 * at(k, i) + at(k - 1, i)));
        if (i > 0 && i + 1 < width) {
          curve = std::max(curve, std::abs(at(k, i + 1) - 2.0 * at(k, i) + at(k, i - 1)));
        }
      }
      lo[static_cast<std::size_t>(k)] = mn - curve;
      hi[static_cast<std::size_t>(k)] = mx + curve;
    }
    lower_ = PeriodicScalarFunction::tabulated(period_, std::move(lo));
    upper_ = PeriodicScalarFunction::tabulated(period_, std::move(hi));
  }
}

CoefficientField CoefficientField::constant(double period, double value) {
  return CoefficientField(GaussianDip{PeriodicScalarFunction::constant(period, value), 0.0, 0.0, 1.0});
}

CoefficientField CoefficientField::time_periodic(PeriodicScalarFunction base) {
  return CoefficientField(GaussianDip{std::move(base), 0.0, 0.0, 1.0});
}

CoefficientField CoefficientField::gaussian_dip(PeriodicScalarFunction base, double amplitude,
                                                double center, double width) {
  return CoefficientField(GaussianDip{std::move(base), amplitude, center, width});
}

CoefficientField CoefficientField::tabulated(RadialPeriodicField grid) {
  return CoefficientField(Tabulated{std::move(grid)});
}

CoefficientField CoefficientField::composite(CoefficientField growth, CoefficientField competition,
                                             RadialPeriodicField density, double inflation) {
  return CoefficientField(Composite{std::make_shared<const CoefficientField>(std::move(growth)),
                                    std::make_shared<const CoefficientField>(std::move(competition)),
                                    std::make_shared<const RadialPeriodicField>(std::move(density)),
                                    inflation});
}

double CoefficientField::operator()(double t, double r) const {
  if (const auto* g = std::get_if<GaussianDip>(&profile_)) {
    const double base = g->base(t);
    return g->amplitude == 0.0 ? base : base - g->amplitude * dip_shape(*g, r);
  }
  if (const auto* tab = std::get_if<Tabulated>(&profile_)) return tab->grid(t, r);
  const auto& c = std::get<Composite>(profile_);
  return (*c.growth)(t, r) - c.inflation * (*c.competition)(t, r) * (*c.density)(t, r);
}

void CoefficientField::sample(double t, std::span<const double> r, std::span<double> out) const {
  if (const auto* g = std::get_if<GaussianDip>(&profile_)) {
    const double base = g->base(t);
    if (g->amplitude == 0.0) {
      std::fill(out.begin(), out.end(), base);
    } else {
      for (std::size_t i = 0; i < r.size(); ++i) out[i] = base - g->amplitude * dip_shape(*g, r[i]);
    }
    return;
  }
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = (*this)(t, r[i]);
}

bool CoefficientField::space_constant() const {
  if (const auto* g = std::get_if<GaussianDip>(&profile_)) return g->amplitude == 0.0;
  return false;
}

bool CoefficientField::time_constant() const {
  if (const auto* g = std::get_if<GaussianDip>(&profile_)) return g->base.is_constant();
  if (const auto* tab = std::get_if<Tabulated>(&profile_)) return tab->grid.time_samples() == 1;
  return false;
}

double CoefficientField::time_mean(double r) const {
  if (const auto* g = std::get_if<GaussianDip>(&profile_)) {
    return g->base.mean() - g->amplitude * dip_shape(*g, r);
  }
  int n = kCompositeTimeSamples * 4;
  if (const auto* tab = std::get_if<Tabulated>(&profile_)) n = tab->grid.time_samples();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += (*this)(period_ * k / n, r);
  return sum / n;
}

double CoefficientField::sup_abs() const {
  return std::max({std::abs(lower_.min()), std::abs(lower_.max()), std::abs(upper_.min()),
                   std::abs(upper_.max())});
}

CoefficientField CoefficientField::with_envelopes(PeriodicScalarFunction lower,
                                                  PeriodicScalarFunction upper) const {
  CoefficientField out = *this;
  out.lower_ = std::move(lower);
  out.upper_ = std::move(upper);
  return out;
}

CoefficientField CoefficientField::with_asymptotics(PeriodicScalarFunction liminf,
                                                    PeriodicScalarFunction limsup) const {
  CoefficientField out = *this;
  out.liminf_ = std::move(liminf);
  out.limsup_ = std::move(limsup);
  return out;
}

}  // namespace stefan
