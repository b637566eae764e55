#include "stefan/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stefan/error.hpp"
#include "stefan/numerics.hpp"
#include "stefan/parallel.hpp"

namespace stefan {

void EigenProblem::validate() const {
  require(d > 0.0 && R > 0.0 && T > 0.0, "eigenproblem needs d, R, T > 0");
  require(grid >= 32, "eigenproblem grid must have at least 32 intervals");
  require(N >= 1, "dimension must be at least 1");
  require(steps_per_period >= 4 && block >= 1 && max_iterations >= 2, "invalid iteration settings");
  require(std::abs(m.period() - T) <= 1e-12 * T, "coefficient period must equal T");
}

namespace {

// One period of phi' = d Lap phi + m phi, Strang split: half reaction, TR-BDF2
// diffusion, half reaction. Reaction factors exp(int m) use Simpson on each
// half step and are tabulated once per problem.
class PeriodMap {
 public:
  explicit PeriodMap(const EigenProblem& p)
      : n_(p.grid), steps_(p.steps_per_period), dr_(p.R / p.grid) {
    const auto op = build_radial_operator(n_, dr_, p.N, p.d, LeftBoundary::Symmetry,
                                          RightBoundary::Dirichlet);
    const double dt = p.T / steps_;
    stepper_ = TrBdf2(op.matrix, dt);

    std::vector<double> r(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) r[static_cast<std::size_t>(i)] = i * dr_;
    const bool time_constant = p.m.time_constant();
    const int tables = time_constant ? 1 : steps_;
    lead_.assign(static_cast<std::size_t>(tables) * n_, 0.0);
    trail_.assign(lead_.size(), 0.0);
    std::vector<double> f0(r.size()), f1(r.size()), f2(r.size());
    auto half_factor = [&](double t0, std::span<double> out) {
      const double h = 0.5 * dt;
      p.m.sample(t0, r, f0);
      p.m.sample(t0 + 0.5 * h, r, f1);
      p.m.sample(t0 + h, r, f2);
      for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::exp(h / 6.0 * (f0[i] + 4.0 * f1[i] + f2[i]));
    };
    for (int j = 0; j < tables; ++j) {
      const double t = j * dt;
      half_factor(t, std::span(lead_).subspan(static_cast<std::size_t>(j) * n_, r.size()));
      half_factor(t + 0.5 * dt, std::span(trail_).subspan(static_cast<std::size_t>(j) * n_, r.size()));
    }
    time_constant_ = time_constant;
  }

  int size() const { return n_; }

  void apply(std::span<double> u) {
    for (int j = 0; j < steps_; ++j) {
      const std::size_t off = time_constant_ ? 0 : static_cast<std::size_t>(j) * n_;
      for (int i = 0; i < n_; ++i) u[static_cast<std::size_t>(i)] *= lead_[off + i];
      stepper_.step(u);
      for (int i = 0; i < n_; ++i) u[static_cast<std::size_t>(i)] *= trail_[off + i];
    }
  }

 private:
  int n_;
  int steps_;
  double dr_;
  bool time_constant_ = false;
  TrBdf2 stepper_;
  std::vector<double> lead_, trail_;
};

}  // namespace

EigenResult principal_eigenvalue(const EigenProblem& prob) {
  prob.validate();
  PeriodMap map(prob);
  const int n = map.size();
  const int k = std::min(prob.block, n);

  Eigen::MatrixXd Q(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) {
      Q(i, j) = std::cos((2 * j + 1) * std::numbers::pi * i / (2.0 * n));
    }
  }
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ() * Eigen::MatrixXd::Identity(n, k);

  Eigen::MatrixXd Z(n, k);
  double rho = 0.0, previous = 0.0, rel_change = INFINITY;
  Eigen::VectorXd phi;
  int it = 0;
  for (it = 1; it <= prob.max_iterations; ++it) {
    Z = Q;
    for (int j = 0; j < k; ++j) map.apply(std::span<double>(Z.col(j).data(), static_cast<std::size_t>(n)));
    const Eigen::MatrixXd H = Q.transpose() * Z;

    Eigen::Index best = 0;
    Eigen::VectorXd y;
    if (k == 1) {
      rho = H(0, 0);
      y = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(H);
      const auto values = es.eigenvalues();
      for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values(i).real() > values(best).real()) best = i;
      }
      rho = values(best).real();
      y = es.eigenvectors().col(best).real();
    }
    phi = Q * y;
    rel_change = std::abs(rho - previous) / std::abs(rho);
    previous = rho;

    Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Z).householderQ() * Eigen::MatrixXd::Identity(n, k);
    if (it >= 2 && rel_change < prob.tolerance) break;
  }
  if (!(rel_change < prob.tolerance)) {
    std::ostringstream os;
    os << "multiplier relative change " << rel_change << " after " << prob.max_iterations << " periods";
    fail(ErrorKind::NonConvergence, os.str());
  }
  if (!(rho > 0.0)) fail(ErrorKind::NonConvergence, "period map multiplier is not positive");

  EigenResult out;
  out.multiplier = rho;
  out.lambda1 = -std::log(rho) / prob.T;
  out.iterations = std::min(it, prob.max_iterations);
  out.rel_change = rel_change;
  out.R = prob.R;
  Eigen::Index imax = 0;
  phi.cwiseAbs().maxCoeff(&imax);
  const double scale = phi(imax);
  out.phi0.resize(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) out.phi0[static_cast<std::size_t>(i)] = phi(i) / scale;
  out.phi0.back() = 0.0;
  return out;
}

RadiusThreshold threshold_radius(double d, const CoefficientField& m, double T, int N,
                                 double search_max, const EigenSettings& settings, double rel_width) {
  require(d > 0.0 && search_max > 0.0, "threshold_radius needs d > 0 and search_max > 0");
  RadiusThreshold out;
  auto lambda = [&](double R) {
    ++out.evaluations;
    return principal_eigenvalue(settings.problem(d, m, R, T, N)).lambda1;
  };

  double R = std::min(1.0, search_max);
  double lo = 0.0, hi = 0.0;
  if (lambda(R) > 0.0) {
    lo = R;
    for (;;) {
      if (R >= search_max) {
        out.bounded = false;
        out.lower = lo;
        out.value = INFINITY;
        return out;
      }
      R = std::min(2.0 * R, search_max);
      if (lambda(R) <= 0.0) break;
      lo = R;
    }
    hi = R;
  } else {
    hi = R;
    for (;;) {
      R *= 0.5;
      if (lambda(R) > 0.0) break;
      hi = R;
      require(R > 1e-8 * search_max, "lambda1 stays nonpositive as R -> 0");
    }
    lo = R;
  }
  while ((hi - lo) > rel_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (lambda(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.bounded = true;
  out.lower = lo;
  out.upper = hi;
  out.value = 0.5 * (lo + hi);
  return out;
}

double max_time_mean(const CoefficientField& m, double R, int samples) {
  double best = -INFINITY;
  for (int i = 0; i <= samples; ++i) best = std::max(best, m.time_mean(R * i / samples));
  return best;
}

namespace {

std::vector<DiffusionSample> scan_diffusion(const CoefficientField& m, double R, double T, int N,
                                            double search_max, const EigenSettings& settings,
                                            const DiffusionScan& scan) {
  require(scan.d_min > 0.0 && search_max > scan.d_min, "diffusion scan needs 0 < d_min < search_max");
  const double decades = std::log10(search_max / scan.d_min);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * scan.points_per_decade)) + 1);
  std::vector<double> ds(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ds[static_cast<std::size_t>(i)] = scan.d_min * std::pow(search_max / scan.d_min, static_cast<double>(i) / (count - 1));
  }
  auto lambdas = parallel_map(ds.size(), [&](std::size_t i) {
    return principal_eigenvalue(settings.problem(ds[i], m, R, T, N)).lambda1;
  });
  std::vector<DiffusionSample> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) out[i] = {ds[i], lambdas[i]};
  return out;
}

// Bisection inside one scan cell with lambda(lo) <= 0 < lambda(hi).
void refine_crossing(DiffusionThreshold& out, const CoefficientField& m, double R, double T, int N,
                     const EigenSettings& settings, double rel_width, double lo, double hi,
                     bool keep_nonpositive_side) {
  auto lambda = [&](double d) { return principal_eigenvalue(settings.problem(d, m, R, T, N)).lambda1; };
  double lam_lo = 0.0, lam_hi = 0.0;
  while ((hi - lo) > rel_width * hi) {
    const double mid = std::sqrt(lo * hi);
    const double lam = lambda(mid);
    if (lam <= 0.0) {
      lo = mid;
      lam_lo = lam;
    } else {
      hi = mid;
      lam_hi = lam;
    }
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  if (keep_nonpositive_side) {
    out.value = lo;
    out.lambda_at_value = lam_lo != 0.0 ? lam_lo : lambda(lo);
  } else {
    out.value = hi;
    out.lambda_at_value = lam_hi != 0.0 ? lam_hi : lambda(hi);
  }
}

}  // namespace

DiffusionThreshold threshold_diffusion_fast(const CoefficientField& m, double R, double T, int N,
                                            double search_max, const EigenSettings& settings,
                                            const DiffusionScan& scan) {
  DiffusionThreshold out;
  out.samples = scan_diffusion(m, R, T, N, search_max, settings, scan);
  const auto& s = out.samples;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].lambda1 <= 0.0) last = static_cast<std::ptrdiff_t>(i);
  }
  if (last < 0) {
    std::ostringstream os;
    os << "lambda1 > 0 for every tested d in [" << s.front().d << ", " << s.back().d << "]";
    fail(ErrorKind::NoSignChange, os.str());
  }
  if (last + 1 == static_cast<std::ptrdiff_t>(s.size())) {
    out.certified = false;
    out.value = s.back().d;
    out.lambda_at_value = s.back().lambda1;
    out.bracket_lo = out.bracket_hi = s.back().d;
    return out;
  }
  const auto i = static_cast<std::size_t>(last);
  refine_crossing(out, m, R, T, N, settings, scan.rel_width, s[i].d, s[i + 1].d, false);
  return out;
}

DiffusionThreshold threshold_diffusion_slow(const CoefficientField& m, double R, double T, int N,
                                            double search_max, const EigenSettings& settings,
                                            const DiffusionScan& scan) {
  DiffusionThreshold out;
  if (!(max_time_mean(m, R) > 0.0)) {
    out.applicable = false;
    return out;
  }
  out.samples = scan_diffusion(m, R, T, N, search_max, settings, scan);
  const auto& s = out.samples;
  std::size_t first = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].lambda1 > 0.0) {
      first = i;
      break;
    }
  }
  if (first == 0) {
    // the d -> 0 limit has not been reached at d_min
    out.certified = false;
    out.value = s.front().d;
    out.lambda_at_value = s.front().lambda1;
    return out;
  }
  if (first == s.size()) {
    out.certified = false;
    out.value = s.back().d;
    out.lambda_at_value = s.back().lambda1;
    out.bracket_lo = out.bracket_hi = s.back().d;
    return out;
  }
  refine_crossing(out, m, R, T, N, settings, scan.rel_width, s[first - 1].d, s[first].d, true);
  return out;
}

}  // namespace stefan
