#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's solvers.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// First positive zero of J_nu, bracketed in [lo, hi].
inline double bessel_zero(double nu, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::cyl_bessel_j(nu, lo) * std::cyl_bessel_j(nu, mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Periodic logistic solution by brute-force RK4 time stepping from V(0) = 1
/// until the period map contracts to `tol`; returns V at t = k*T/samples.
inline std::vector<double> periodic_logistic_rk4(const std::function<double(double)>& a,
                                                 const std::function<double(double)>& b, double T,
                                                 int samples, double dt = 1e-4, double tol = 1e-10) {
  // a whole number of steps between recorded samples
  const int per_sample = static_cast<int>(std::ceil(T / dt / samples));
  const int steps = per_sample * samples;
  const double h = T / steps;
  auto f = [&](double t, double v) { return v * (a(t) - b(t) * v); };
  auto period = [&](double v, std::vector<double>* record) {
    for (int j = 0; j < steps; ++j) {
      if (record && j % per_sample == 0) record->push_back(v);
      const double t = j * h;
      const double k1 = f(t, v);
      const double k2 = f(t + 0.5 * h, v + 0.5 * h * k1);
      const double k3 = f(t + 0.5 * h, v + 0.5 * h * k2);
      const double k4 = f(t + h, v + h * k3);
      v += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return v;
  };
  double v = 1.0;
  for (int p = 0; p < 200; ++p) {
    const double next = period(v, nullptr);
    const bool done = std::abs(next - v) < tol;
    v = next;
    if (done) break;
  }
  std::vector<double> out;
  period(v, &out);
  return out;
}

/// Principal Dirichlet eigenvalue of -d (phi'' + (N-1)/r phi') - m(r) phi =
/// lambda phi on [0, R] with phi'(0) = 0, by RK4 shooting and bisection on
/// lambda: the principal eigenfunction has no interior zero, so lambda lies
/// below the eigenvalue exactly when the shot stays positive up to R.
inline double radial_dirichlet_eigenvalue(double d, const std::function<double(double)>& m,
                                          double R, int N, double lam_lo, double lam_hi,
                                          int steps = 20000) {
  auto positive_to_R = [&](double lam) {
    // series start: phi = 1 - c r^2 with c = (m(0)+lam)/(2 N d)
    const double r0 = 1e-6 * R;
    const double c = (m(0.0) + lam) / (2.0 * N * d);
    double y = 1.0 - c * r0 * r0, p = -2.0 * c * r0;
    const double h = (R - r0) / steps;
    auto rhs = [&](double r, double yy, double pp, double& dy, double& dp) {
      dy = pp;
      dp = -(N - 1) / r * pp - (m(r) + lam) / d * yy;
    };
    double r = r0;
    for (int i = 0; i < steps; ++i) {
      double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
      rhs(r, y, p, k1y, k1p);
      rhs(r + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p, k2y, k2p);
      rhs(r + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p, k3y, k3p);
      rhs(r + h, y + h * k3y, p + h * k3p, k4y, k4p);
      y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      r += h;
      if (y <= 0.0) return false;
    }
    return true;
  };
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    if (positive_to_R(mid)) {
      lam_lo = mid;
    } else {
      lam_hi = mid;
    }
  }
  return 0.5 * (lam_lo + lam_hi);
}

/// Semi-wave oracle for constant coefficients: q solves
///   -d q'' + k q' = q (a - b q),  q(0) = 0,  q(inf) = a/b.
/// q'(0) follows from integrating the stable manifold of (a/b, 0) backwards to
/// q = 0; k0 solves mu q'(0; k) = k by bisection on k in (0, 2 sqrt(a d)).
inline double semiwave_slope(double k, double a, double b, double d, double step = 1e-4) {
  const double qs = a / b;
  // linearization at (qs, 0): x'' = (k x' + a x)/d
  const double lam_s = 0.5 * (k / d - std::sqrt(k * k / (d * d) + 4.0 * a / d));
  const double eps = 1e-7 * qs;
  double q = qs - eps, p = lam_s * (-eps);
  auto rhs = [&](double qq, double pp, double& dq, double& dp) {
    dq = pp;
    dp = (k * pp - qq * (a - b * qq)) / d;
  };
  const double h = -step;
  for (int i = 0; i < 50000000; ++i) {
    double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
    rhs(q, p, k1q, k1p);
    rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p, k2q, k2p);
    rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p, k3q, k3p);
    rhs(q + h * k3q, p + h * k3p, k4q, k4p);
    const double qn = q + h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
    const double pn = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (qn <= 0.0) {
      // linear interpolation to q = 0
      const double w = q / (q - qn);
      return p + w * (pn - p);
    }
    q = qn;
    p = pn;
  }
  return std::nan("");
}

inline double semiwave_k0(double mu, double a, double b, double d) {
  double lo = 0.0, hi = 2.0 * std::sqrt(a * d) * (1.0 - 1e-9);
  for (int it = 0; it < 60; ++it) {
    const double k = 0.5 * (lo + hi);
    if (mu * semiwave_slope(k, a, b, d) > k) {
      lo = k;
    } else {
      hi = k;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
