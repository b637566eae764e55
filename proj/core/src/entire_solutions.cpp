#include "stefan/entire_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stefan/error.hpp"
#include "stefan/numerics.hpp"
#include "stefan/periodic_ode.hpp"

namespace stefan {

namespace {

// Coefficient samples at quarter steps t_j = j*dt/4, j = 0..4*steps, so that
// each half-step reaction has its start, middle and end values.
struct QuarterTable {
  bool constant = false;
  int n = 0;
  std::vector<double> values;

  QuarterTable(const CoefficientField& f, std::span<const double> r, double dt, int steps)
      : constant(f.time_constant()), n(static_cast<int>(r.size())) {
    const int rows = constant ? 1 : 4 * steps + 1;
    values.resize(static_cast<std::size_t>(rows) * n);
    for (int j = 0; j < rows; ++j) {
      f.sample(0.25 * dt * j, r, std::span(values).subspan(static_cast<std::size_t>(j) * n, r.size()));
    }
  }
  std::span<const double> at(int quarter) const {
    const std::size_t row = constant ? 0 : static_cast<std::size_t>(quarter);
    return std::span(values).subspan(row * n, static_cast<std::size_t>(n));
  }
};

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

EntireSolution solve_periodic_entire(double d, const CoefficientField& growth,
                                     const CoefficientField& b, int N, double r_out, int grid,
                                     const EntireOptions& options) {
  require(d > 0.0 && r_out > 0.0, "entire solution needs d, R_out > 0");
  require(grid >= 32, "entire solution grid must have at least 32 intervals");
  require(options.steps_per_period >= 4 && options.max_periods >= 1, "invalid iteration settings");
  const double T = growth.period();
  require(std::abs(b.period() - T) <= 1e-12 * T, "growth and b must share the period");
  require(b.lower().min() > 0.0, "b must be positive");

  const int steps = options.steps_per_period;
  const double dt = T / steps;
  const double dr = r_out / grid;
  const std::size_t n = static_cast<std::size_t>(grid) + 1;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<double>(i) * dr;

  const auto op = build_radial_operator(grid, dr, N, d, LeftBoundary::Symmetry, RightBoundary::Neumann);
  TrBdf2 stepper(op.matrix, dt);
  const QuarterTable a_tab(growth, r, dt, steps), b_tab(b, r, dt, steps);

  std::vector<double> w(n);
  double level = 0.0;
  if (!options.initial.empty()) {
    require(options.initial.size() == n, "initial guess must have grid + 1 values");
    w = options.initial;
  } else {
    // plateau of the tail, or the best interior ratio when the tail is not positive
    level = growth.time_mean(r_out) / b.time_mean(r_out);
    if (!(level > 0.0)) {
      for (double x : r) level = std::max(level, growth.time_mean(x) / b.time_mean(x));
    }
    if (!(level > 0.0)) level = 1.0;
    std::fill(w.begin(), w.end(), level);
  }

  std::vector<double> rows(static_cast<std::size_t>(steps) * n);
  std::vector<double> start(n);
  double residual = INFINITY;
  int period = 0;
  for (period = 1; period <= options.max_periods; ++period) {
    start = w;
    for (int j = 0; j < steps; ++j) {
      std::copy(w.begin(), w.end(), rows.begin() + static_cast<std::ptrdiff_t>(j * n));
      const int q = 4 * j;
      logistic_substep(w, 0.5 * dt, a_tab.at(q), a_tab.at(q + 1), a_tab.at(q + 2), b_tab.at(q),
                       b_tab.at(q + 1), b_tab.at(q + 2));
      stepper.step(w);
      for (auto& x : w) x = std::max(x, 0.0);
      logistic_substep(w, 0.5 * dt, a_tab.at(q + 2), a_tab.at(q + 3), a_tab.at(q + 4),
                       b_tab.at(q + 2), b_tab.at(q + 3), b_tab.at(q + 4));
    }
    const double sup = *std::max_element(w.begin(), w.end());
    if (!(sup >= 1e-12)) {
      std::ostringstream os;
      os << "period map iterate collapsed (sup " << sup << ") after " << period << " periods";
      fail(ErrorKind::Degenerate, os.str());
    }
    residual = sup_diff(w, start);
    if (residual < options.tolerance) break;
  }
  if (!(residual < options.tolerance)) {
    std::ostringstream os;
    os << "period map change " << residual << " after " << options.max_periods << " periods";
    fail(ErrorKind::NonConvergence, os.str());
  }

  EntireSolution out;
  out.field = RadialPeriodicField(T, r_out, steps, grid, std::move(rows));
  out.field.residual = residual;
  out.residual = residual;
  out.periods = std::min(period, options.max_periods);
  out.initial_level = level;
  return out;
}

double default_entire_radius(std::initializer_list<const CoefficientField*> fields) {
  double width = 0.0;
  for (const auto* f : fields) {
    if (const auto* dip = std::get_if<CoefficientField::GaussianDip>(&f->profile())) {
      if (dip->amplitude != 0.0) width = std::max(width, std::abs(dip->center) + dip->width);
    }
  }
  return std::max(20.0, 10.0 * width);
}

AsymptoticBoundsReport check_asymptotic_bounds(const RadialPeriodicField& field,
                                               const PeriodicScalarFunction& V_star,
                                               const PeriodicScalarFunction& V_upper) {
  AsymptoticBoundsReport rep;
  rep.epsilon = 0.02 * V_upper.max();
  rep.lower_margin = INFINITY;
  rep.upper_margin = INFINITY;
  double worst = INFINITY;
  const int first = static_cast<int>(std::floor(0.8 * field.intervals()));
  for (int k = 0; k < field.time_samples(); ++k) {
    const double t = field.time(k);
    const double lo = V_star(t) - rep.epsilon, hi = V_upper(t) + rep.epsilon;
    for (int i = first; i <= field.intervals(); ++i) {
      const double x = field.at(k, i);
      const double ml = x - lo, mu = hi - x;
      rep.lower_margin = std::min(rep.lower_margin, ml);
      rep.upper_margin = std::min(rep.upper_margin, mu);
      if (std::min(ml, mu) < worst) {
        worst = std::min(ml, mu);
        rep.worst = {t, field.radius(i), x};
      }
    }
  }
  rep.pass = rep.lower_margin >= 0.0 && rep.upper_margin >= 0.0;
  return rep;
}

CoefficientField effective_u_growth(const ModelParams& params, const RadialPeriodicField& V,
                                    double inflation) {
  const auto env = resident_envelopes(params);
  const auto& m1 = params.m1;
  const auto& c1 = params.c1;
  const auto& Vl = env.lower.V;
  const auto& Vu = env.upper.V;
  const double T = params.T;
  const int n = 512;
  auto liminf = PeriodicScalarFunction::sample(T, n, [&](double t) {
    return m1.liminf_or_lower()(t) - inflation * c1.limsup_or_upper()(t) * Vu(t);
  });
  auto limsup = PeriodicScalarFunction::sample(T, n, [&](double t) {
    return m1.limsup_or_upper()(t) - inflation * c1.liminf_or_lower()(t) * Vl(t);
  });
  return CoefficientField::composite(m1, c1, V, inflation)
      .with_asymptotics(std::move(liminf), std::move(limsup));
}

EntireSolution resident_steady_state(const ModelParams& params, double r_out, int grid,
                                     const EntireOptions& options) {
  return solve_periodic_entire(params.d2, params.m2, params.b2, params.N, r_out, grid, options);
}

}  // namespace stefan
