#include <algorithm>
#include <cmath>
#include <sstream>

#include "stefan/analysis.hpp"
#include "stefan/error.hpp"
#include "stefan/numerics.hpp"
#include "stefan/periodic_ode.hpp"

namespace stefan {

namespace {

// Periodic problem U_t - d U_rr + K(t) U_r = U (a - b U) on [0, L] with
// U(t, 0) = 0 and U(t, L) = V(t), K tabulated at the step times.
class SemiWaveMap {
 public:
  SemiWaveMap(const PeriodicScalarFunction& a, const PeriodicScalarFunction& b,
              const PeriodicScalarFunction& V, double d, double L, int intervals, int steps)
      : d_(d), L_(L), n_(intervals), steps_(steps), T_(a.period()), dt_(T_ / steps),
        dr_(L / intervals), V_(V) {
    const auto m = static_cast<std::size_t>(n_ - 1);
    for (int q = 0; q <= 4 * steps_; ++q) {
      qa_.push_back(a(0.25 * dt_ * q));
      qb_.push_back(b(0.25 * dt_ * q));
    }
    constant_ = a.is_constant() && b.is_constant();
    for (auto* v : {&a0_, &am_, &a1_, &b0_, &bm_, &b1_}) v->assign(m, 0.0);
    g0_.assign(m, 0.0);
    gg_.assign(m, 0.0);
    g1_.assign(m, 0.0);
    diff_ = build_radial_operator(n_, dr_, 1, d_, LeftBoundary::Dirichlet, RightBoundary::Dirichlet);
    std::vector<double> adv(static_cast<std::size_t>(n_) + 1, -1.0);
    unit_ = build_radial_operator(n_, dr_, 1, d_, LeftBoundary::Dirichlet, RightBoundary::Dirichlet, adv);
    for (std::size_t i = 0; i < m; ++i) {
      unit_.matrix.lower[i] -= diff_.matrix.lower[i];
      unit_.matrix.diag[i] -= diff_.matrix.diag[i];
      unit_.matrix.upper[i] -= diff_.matrix.upper[i];
    }
    unit_.right_coupling -= diff_.right_coupling;
    work_ = diff_.matrix;
    rows_.assign(static_cast<std::size_t>(steps_) * (n_ + 1), 0.0);
  }

  // One period from the interior state u (nodes 1..n-1); rows are stored at
  // the step starts.
  void period(std::vector<double>& u, const std::vector<double>& K) {
    for (int k = 0; k < steps_; ++k) {
      store(k, u);
      const double kmid = 0.5 * (K[static_cast<std::size_t>(k)] + K[static_cast<std::size_t>((k + 1) % steps_)]);
      if (kmid != k_cached_) {
        // diffusion plus kmid times the unit advection stencil
        for (std::size_t i = 0; i < work_.size(); ++i) {
          work_.lower[i] = diff_.matrix.lower[i] + kmid * unit_.matrix.lower[i];
          work_.diag[i] = diff_.matrix.diag[i] + kmid * unit_.matrix.diag[i];
          work_.upper[i] = diff_.matrix.upper[i] + kmid * unit_.matrix.upper[i];
        }
        coupling_ = diff_.right_coupling + kmid * unit_.right_coupling;
        stepper_.reset(work_, dt_);
        k_cached_ = kmid;
      }
      const double t = k * dt_;
      react(u, 4 * k);
      g0_.back() = coupling_ * V_(t);
      gg_.back() = coupling_ * V_(t + TrBdf2::kGamma * dt_);
      g1_.back() = coupling_ * V_(t + dt_);
      stepper_.step(u, g0_, gg_, g1_);
      react(u, 4 * k + 2);
    }
  }

  // mu U_r(t_k, 0) from the stored rows, second order one-sided.
  std::vector<double> flux(double mu) const {
    std::vector<double> out(static_cast<std::size_t>(steps_));
    for (int k = 0; k < steps_; ++k) {
      const double* row = rows_.data() + static_cast<std::size_t>(k) * (n_ + 1);
      out[static_cast<std::size_t>(k)] = mu * (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * dr_);
    }
    return out;
  }

  RadialPeriodicField field() const { return RadialPeriodicField(T_, L_, steps_, n_, rows_); }
  const std::vector<double>& rows() const { return rows_; }

 private:
  void store(int k, const std::vector<double>& u) {
    double* row = rows_.data() + static_cast<std::size_t>(k) * (n_ + 1);
    row[0] = 0.0;
    std::copy(u.begin(), u.end(), row + 1);
    row[n_] = V_(k * dt_);
  }

  void react(std::vector<double>& u, int q) {
    const auto i = static_cast<std::size_t>(q);
    if (constant_ && filled_) {
      logistic_substep(u, 0.5 * dt_, a0_, am_, a1_, b0_, bm_, b1_);
      return;
    }
    filled_ = true;
    std::fill(a0_.begin(), a0_.end(), qa_[i]);
    std::fill(am_.begin(), am_.end(), qa_[i + 1]);
    std::fill(a1_.begin(), a1_.end(), qa_[i + 2]);
    std::fill(b0_.begin(), b0_.end(), qb_[i]);
    std::fill(bm_.begin(), bm_.end(), qb_[i + 1]);
    std::fill(b1_.begin(), b1_.end(), qb_[i + 2]);
    logistic_substep(u, 0.5 * dt_, a0_, am_, a1_, b0_, bm_, b1_);
  }

  double d_, L_;
  int n_, steps_;
  double T_, dt_, dr_;
  PeriodicScalarFunction V_;
  std::vector<double> qa_, qb_, a0_, am_, a1_, b0_, bm_, b1_, g0_, gg_, g1_, rows_;
  RadialOperator diff_, unit_;
  Tridiagonal work_;
  double coupling_ = 0.0;
  TrBdf2 stepper_;
  double k_cached_ = NAN;
  bool constant_ = false, filled_ = false;
};

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, std::abs(x[i] - y[i]));
  return s;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

SemiWaveResult semiwave_k0(double mu, const PeriodicScalarFunction& a,
                           const PeriodicScalarFunction& b, double d,
                           const SemiWaveOptions& options) {
  require(mu > 0.0 && d > 0.0, "semi-wave needs mu, d > 0");
  require(b.min() > 0.0, "semi-wave needs b > 0");
  require(std::abs(a.period() - b.period()) <= 1e-12 * a.period(), "a and b must share the period");
  require(options.dr > 0.0 && options.steps_per_period >= 8, "invalid semi-wave grid");
  const double mean_a = a.mean();
  if (mean_a <= 0.0) {
    std::ostringstream os;
    os << "mean of a is " << mean_a << " <= 0";
    fail(ErrorKind::NoSemiWave, os.str());
  }
  const double L_min = 40.0 * std::sqrt(d / mean_a);
  const double L = options.L > 0.0 ? options.L : L_min;
  require(L >= L_min * (1.0 - 1e-12), "semi-wave truncation must be at least 40 sqrt(d / mean a)");
  const int n = std::max(16, static_cast<int>(std::ceil(L / options.dr - 1e-9)));
  const int steps = options.steps_per_period;
  const double T = a.period();

  SemiWaveResult out;
  out.L = L;
  out.upper_bound = 2.0 * std::sqrt(d * mean_a);
  out.V = solve_periodic_logistic(a, b).V;
  SemiWaveMap map(a, b, out.V, d, L, n, steps);

  // start: the plateau V(0) behind a boundary layer, K at half the bound
  std::vector<double> u(static_cast<std::size_t>(n - 1));
  const double layer = std::sqrt(d / mean_a);
  for (int i = 1; i < n; ++i) u[static_cast<std::size_t>(i - 1)] = out.V(0.0) * (1.0 - std::exp(-i * (L / n) / layer));
  std::vector<double> K(static_cast<std::size_t>(steps), 0.25 * out.upper_bound);

  // inexact inner solves, judged on the boundary flux (the only output the
  // outer iteration sees); the tolerance follows the current change in K
  const double tight = 1e-3 * options.tolerance;
  std::vector<double> G;
  auto solve_inner = [&](double tol) {
    map.period(u, K);
    G = map.flux(mu);
    for (int p = 0; p < 10000; ++p) {
      map.period(u, K);
      auto next = map.flux(mu);
      const double change = sup_diff(next, G);
      G = std::move(next);
      if (change < tol) return;
    }
    fail(ErrorKind::NonConvergence, "semi-wave period map did not settle");
  };

  const bool autonomous = a.is_constant() && b.is_constant();
  double omega = options.relaxation;
  double last_change = INFINITY;
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    solve_inner(std::max(tight, 1e-3 * std::min(last_change, 1.0)));
    std::vector<double> next(K.size());
    for (std::size_t k = 0; k < K.size(); ++k) next[k] = (1.0 - omega) * K[k] + omega * G[k];
    // autonomous inputs: the semi-wave is stationary and K a constant
    if (autonomous) std::fill(next.begin(), next.end(), mean_of(next));
    const double change = sup_diff(next, K);
    if (change > last_change && omega > 1.0 / 64.0) omega *= 0.5;
    last_change = change;
    K = std::move(next);
    out.iterations = it;
    const double mk = mean_of(K);
    if (!(mk > 0.0) || mk * mk >= 4.0 * d * mean_a) {
      std::ostringstream os;
      os << "mean K = " << mk << " left the existence region (bound " << out.upper_bound << ")";
      fail(ErrorKind::NoSemiWave, os.str());
    }
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorKind::NonConvergence, "semi-wave fixed point did not converge");

  // final inner solve with the accepted K, so the residual is measured honestly
  solve_inner(tight);
  out.boundary_residual = sup_diff(G, K);
  out.K0 = PeriodicScalarFunction::tabulated(T, K);
  out.mean_K0 = mean_of(K);
  out.U = map.field();

  const double vmax = out.V.max();
  const int half = n / 2;
  for (int k = 0; k < steps; ++k) {
    const double vt = out.V(out.U.time(k));
    for (int i = half; i <= n; ++i) out.tail_gap = std::max(out.tail_gap, std::abs(out.U.at(k, i) - vt) / vmax);
  }
  return out;
}

}  // namespace stefan
