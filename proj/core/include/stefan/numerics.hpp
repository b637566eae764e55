#pragma once

#include <span>
#include <vector>

namespace stefan {

/// Tridiagonal matrix; lower[0] and upper[n-1] are unused.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n) {}
  std::size_t size() const { return diag.size(); }
  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Thomas factorization of a diagonally dominant tridiagonal matrix.
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  explicit TridiagonalSolver(const Tridiagonal& a) { factor(a); }
  void factor(const Tridiagonal& a);
  /// Solves A x = rhs; x may alias rhs.
  void solve(std::span<const double> rhs, std::span<double> x) const;

 private:
  std::vector<double> lower_, inv_pivot_, upper_;
};

enum class LeftBoundary { Symmetry, Dirichlet };
enum class RightBoundary { Dirichlet, Neumann };

/// Second-order finite-difference form of
///   diffusivity * (u_rr + (N-1)/r u_r) + advection(r) * u_r
/// on the uniform nodes r_i = i*dr, i = 0..n.
///
/// Interior rows are finite volumes on [r_i - dr/2, r_i + dr/2] (exact on
/// quadratics); at a symmetry origin the Laplacian is N*u_rr with the mirror
/// ghost u_{-1} = u_1, and a Neumann right end is a zero-flux half cell. Dirichlet ends are eliminated: the
/// unknowns are the remaining nodes and boundary values enter through
/// `left_coupling`/`right_coupling` (the coefficient multiplying the boundary
/// value in the first/last unknown row).
struct RadialOperator {
  Tridiagonal matrix;
  int first_node = 0;  // node index of unknown 0
  double left_coupling = 0.0;
  double right_coupling = 0.0;

  int unknowns() const { return static_cast<int>(matrix.size()); }
};

/// advection may be empty (no advection) or hold one coefficient per node.
RadialOperator build_radial_operator(int intervals, double dr, int dimension, double diffusivity,
                                     LeftBoundary left, RightBoundary right,
                                     std::span<const double> advection = {});

/// One TR-BDF2 step (gamma = 2 - sqrt(2)) of u' = A u + g(t) with A frozen over
/// the step. Both implicit stages share the matrix I - (gamma/2) dt A, so one
/// factorization serves the whole step. L-stable and second order.
class TrBdf2 {
 public:
  static constexpr double kGamma = 0.5857864376269049511983112;  // 2 - sqrt(2)

  TrBdf2() = default;
  TrBdf2(const Tridiagonal& a, double dt) { reset(a, dt); }
  void reset(const Tridiagonal& a, double dt);

  /// g0, g_gamma, g1 are sources at t, t + gamma*dt, t + dt; empty spans mean zero.
  void step(std::span<double> u, std::span<const double> g0 = {},
            std::span<const double> g_gamma = {}, std::span<const double> g1 = {});

  double dt() const { return dt_; }

 private:
  Tridiagonal a_;
  TridiagonalSolver implicit_;
  double dt_ = 0.0;
  std::vector<double> stage_, rhs_;
};

/// Exact-in-space reaction substep for the logistic law u' = u (a(t) - b(t) u)
/// over [t, t + tau]: classical RK4 on the linear equation for w = 1/u, using
/// per-node coefficients at the start, midpoint and end of the substep.
/// Zero stays zero; values below 1e-250 follow the linearized law.
void logistic_substep(std::span<double> u, double tau, std::span<const double> a0,
                      std::span<const double> a_mid, std::span<const double> a1,
                      std::span<const double> b0, std::span<const double> b_mid,
                      std::span<const double> b1);

/// Composite Simpson weights on an even number of intervals over [0, length].
double simpson(std::span<const double> f, double length);

/// Second-order one-sided derivative at the right end of uniform samples.
inline double right_derivative(std::span<const double> u, double h) {
  const auto n = u.size() - 1;
  return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
}

/// Second-order one-sided derivative at the left end of uniform samples.
inline double left_derivative(std::span<const double> u, double h) {
  return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
}

/// Linear interpolation of samples y on uniform nodes x_i = i*h at x, with the
/// value `beyond` past the last node.
double interpolate_uniform(std::span<const double> y, double h, double x, double beyond);

}  // namespace stefan
