#include "stefan/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "stefan/error.hpp"

namespace stefan {

void Tridiagonal::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + upper[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
  y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void TridiagonalSolver::factor(const Tridiagonal& a) {
  const std::size_t n = a.size();
  lower_ = a.lower;
  upper_.assign(n, 0.0);
  inv_pivot_.assign(n, 0.0);
  double pivot = a.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = a.diag[i] - lower_[i] * upper_[i - 1];
    if (pivot == 0.0) fail(ErrorKind::StabilityFailure, "singular tridiagonal system");
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = a.upper[i] * inv_pivot_[i];
  }
}

void TridiagonalSolver::solve(std::span<const double> rhs, std::span<double> x) const {
  const std::size_t n = inv_pivot_.size();
  x[0] = rhs[0] * inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - lower_[i] * x[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
}

RadialOperator build_radial_operator(int intervals, double dr, int dimension, double diffusivity,
                                     LeftBoundary left, RightBoundary right,
                                     std::span<const double> advection) {
  require(intervals >= 2 && dr > 0.0, "radial operator needs at least two intervals");
  require(advection.empty() || advection.size() == static_cast<std::size_t>(intervals + 1),
          "advection needs one coefficient per node");
  RadialOperator op;
  op.first_node = left == LeftBoundary::Symmetry ? 0 : 1;
  const int last_node = right == RightBoundary::Neumann ? intervals : intervals - 1;
  const int n = last_node - op.first_node + 1;
  op.matrix = Tridiagonal(static_cast<std::size_t>(n));
  const double k = diffusivity / (dr * dr);
  const int geom = dimension - 1;

  for (int node = op.first_node; node <= last_node; ++node) {
    const auto row = static_cast<std::size_t>(node - op.first_node);
    double lo = 0.0, di = 0.0, up = 0.0;
    if (node == 0) {
      di = -2.0 * dimension * k;
      up = 2.0 * dimension * k;
    } else if (node == intervals) {
      // half cell [R - dr/2, R] with zero flux through R
      const double r = node * dr;
      const double rm = r - 0.5 * dr;
      const double vol = (std::pow(r, dimension) - std::pow(rm, dimension)) / dimension;
      lo = diffusivity * std::pow(rm, geom) / (dr * vol);
      di = -lo;
    } else {
      // finite-volume weights: exact on r^2 in every dimension
      const double r = node * dr;
      const double rp = r + 0.5 * dr, rm = r - 0.5 * dr;
      const double vol = (std::pow(rp, dimension) - std::pow(rm, dimension)) / dimension;
      lo = diffusivity * std::pow(rm, geom) / (dr * vol);
      up = diffusivity * std::pow(rp, geom) / (dr * vol);
      di = -(lo + up);
      if (!advection.empty()) {
        const double c = advection[static_cast<std::size_t>(node)] / (2.0 * dr);
        lo -= c;
        up += c;
      }
    }
    op.matrix.lower[row] = lo;
    op.matrix.diag[row] = di;
    op.matrix.upper[row] = up;
  }
  if (left == LeftBoundary::Dirichlet) {
    op.left_coupling = op.matrix.lower[0];
    op.matrix.lower[0] = 0.0;
  }
  if (right == RightBoundary::Dirichlet) {
    op.right_coupling = op.matrix.upper[static_cast<std::size_t>(n - 1)];
    op.matrix.upper[static_cast<std::size_t>(n - 1)] = 0.0;
  }
  return op;
}

void TrBdf2::reset(const Tridiagonal& a, double dt) {
  a_ = a;
  dt_ = dt;
  const double tau = 0.5 * kGamma * dt;
  Tridiagonal m = a;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.lower[i] *= -tau;
    m.upper[i] *= -tau;
    m.diag[i] = 1.0 - tau * m.diag[i];
  }
  implicit_.factor(m);
  stage_.assign(a.size(), 0.0);
  rhs_.assign(a.size(), 0.0);
}

void TrBdf2::step(std::span<double> u, std::span<const double> g0, std::span<const double> g_gamma,
                  std::span<const double> g1) {
  constexpr double g = kGamma;
  constexpr double c_stage = 1.0 / (g * (2.0 - g));
  constexpr double c_old = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
  const double tau = 0.5 * g * dt_;
  const std::size_t n = a_.size();

  a_.multiply(u, rhs_);
  for (std::size_t i = 0; i < n; ++i) rhs_[i] = u[i] + tau * rhs_[i];
  if (!g0.empty()) for (std::size_t i = 0; i < n; ++i) rhs_[i] += tau * g0[i];
  if (!g_gamma.empty()) for (std::size_t i = 0; i < n; ++i) rhs_[i] += tau * g_gamma[i];
  implicit_.solve(rhs_, stage_);

  for (std::size_t i = 0; i < n; ++i) rhs_[i] = c_stage * stage_[i] - c_old * u[i];
  if (!g1.empty()) for (std::size_t i = 0; i < n; ++i) rhs_[i] += tau * g1[i];
  implicit_.solve(rhs_, u);
}

void logistic_substep(std::span<double> u, double tau, std::span<const double> a0,
                      std::span<const double> a_mid, std::span<const double> a1,
                      std::span<const double> b0, std::span<const double> b_mid,
                      std::span<const double> b1) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i];
    if (x <= 0.0) continue;
    if (x < 1e-250) {
      u[i] = x * std::exp(tau * (a0[i] + 4.0 * a_mid[i] + a1[i]) / 6.0);
      continue;
    }
    const double w = 1.0 / x;
    const double k1 = -a0[i] * w + b0[i];
    const double k2 = -a_mid[i] * (w + 0.5 * tau * k1) + b_mid[i];
    const double k3 = -a_mid[i] * (w + 0.5 * tau * k2) + b_mid[i];
    const double k4 = -a1[i] * (w + tau * k3) + b1[i];
    const double w1 = w + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    u[i] = 1.0 / w1;
  }
}

double simpson(std::span<const double> f, double length) {
  const std::size_t n = f.size() - 1;
  require(n >= 2 && n % 2 == 0, "simpson needs an even number of intervals");
  const double h = length / static_cast<double>(n);
  double s = f[0] + f[n];
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

double interpolate_uniform(std::span<const double> y, double h, double x, double beyond) {
  const auto n = y.size() - 1;
  if (x <= 0.0) return y[0];
  const double p = x / h;
  if (p >= static_cast<double>(n)) return p == static_cast<double>(n) ? y[n] : beyond;
  const auto k = static_cast<std::size_t>(p);
  const double w = p - static_cast<double>(k);
  return y[k] + w * (y[k + 1] - y[k]);
}

}  // namespace stefan
