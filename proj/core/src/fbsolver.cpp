#include "stefan/fbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stefan/error.hpp"

namespace stefan {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Stopped: return "stopped";
    case Termination::StabilityFailure: return "stability_failure";
    case Termination::DomainExhausted: return "domain_exhausted";
    case Termination::Interrupted: return "interrupted";
  }
  return "unknown";
}

std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

void SolverConfig::validate(const ModelParams& params) const {
  require(Ns >= 128, "Ns must be at least 128 (no first-order front stencil)");
  require(Nr >= 64, "Nr must be at least 64");
  require(steps_per_period >= 64, "dt must not exceed T/64");
  require(R_out > 4.0 * params.h0(), "R_out must exceed 4 h0");
  require(t_end > 0.0, "t_end must be positive");
  require(snapshot_every >= 0, "snapshot_every must be nonnegative");
  require(negativity_tolerance >= 0.0, "negativity tolerance must be nonnegative");
}

namespace {

double sup(const std::vector<double>& x) {
  return x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
}
double inf(const std::vector<double>& x) {
  return x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
}

}  // namespace

AprioriBounds apriori_bounds(const ModelParams& p, double r_max) {
  AprioriBounds b;
  const double m1 = p.m1.sup_abs(), m2 = p.m2.sup_abs();
  b.C1 = std::max(m1 / p.b1.lower().min(), p.init.u_sup());
  b.C2 = std::max(m2 / p.b2.lower().min(), p.init.v_sup(r_max));
  b.M = std::max({1.0 / p.h0(), std::sqrt(m1 / (2.0 * p.d1)), 4.0 * p.init.u_c1_norm() / (3.0 * b.C1)});
  b.C3 = 2.0 * b.M * b.C1 * p.mu;
  return b;
}

SimulationState initial_state(const ModelParams& params, const SolverConfig& config, bool coupled) {
  SimulationState s;
  s.h = params.h0();
  s.u = params.init.u_samples(config.Ns);
  s.u.back() = 0.0;
  if (coupled) {
    s.v.resize(static_cast<std::size_t>(config.Nr) + 1);
    const double dr = config.R_out / config.Nr;
    for (std::size_t j = 0; j < s.v.size(); ++j) s.v[j] = params.init.v(static_cast<double>(j) * dr);
  }
  return s;
}

FreeBoundarySolver::FreeBoundarySolver(ModelParams params, SolverConfig config, bool coupled)
    : params_(std::move(params)), config_(config), coupled_(coupled) {
  params_.validate();
  config_.validate(params_);
  ds_ = 1.0 / config_.Ns;
  dr_ = config_.R_out / config_.Nr;
  u_limit_ = 2.0 * apriori_bounds(params_, config_.R_out).C1;
  s_nodes_.resize(static_cast<std::size_t>(config_.Ns) + 1);
  for (std::size_t i = 0; i < s_nodes_.size(); ++i) s_nodes_[i] = static_cast<double>(i) * ds_;
  r_nodes_.resize(static_cast<std::size_t>(config_.Nr) + 1);
  for (std::size_t j = 0; j < r_nodes_.size(); ++j) r_nodes_[j] = static_cast<double>(j) * dr_;
  v_operator_ = build_radial_operator(config_.Nr, dr_, params_.N, params_.d2, LeftBoundary::Symmetry,
                                      RightBoundary::Neumann)
                    .matrix;
}

double FreeBoundarySolver::front_speed(const std::vector<double>& u, double h) const {
  const std::size_t n = u.size() - 1;
  return params_.mu * (4.0 * u[n - 1] - u[n - 2]) / (2.0 * ds_ * h);
}

// Half-step logistic reaction for u over [t0, t0 + tau/2]; node radii follow
// the front h0 + hp (t - t0).
void FreeBoundarySolver::react_u(std::vector<double>& u, const std::vector<double>& v, double t0,
                                 double h0, double hp, double tau) {
  const std::size_t n = u.size();
  for (int q = 0; q < 3; ++q) {
    const double t = t0 + 0.25 * tau * q;
    const double h = h0 + hp * 0.25 * tau * q;
    auto& pos = pos_[q];
    pos.resize(n);
    a_[q].resize(n);
    b_[q].resize(n);
    c_[q].resize(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = s_nodes_[i] * h;
    params_.m1.sample(t, pos, a_[q]);
    params_.b1.sample(t, pos, b_[q]);
    params_.c1.sample(t, pos, c_[q]);
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = coupled_ ? interpolate_uniform(v, dr_, pos[i], v.back()) : 0.0;
      a_[q][i] -= c_[q][i] * vi;
    }
  }
  logistic_substep(u, 0.5 * tau, a_[0], a_[1], a_[2], b_[0], b_[1], b_[2]);
}

// Half-step logistic reaction for v over [t0, t0 + tau/2] with u frozen at its
// profile u on the front h0, extended by zero past it.
void FreeBoundarySolver::react_v(std::vector<double>& v, const std::vector<double>& u, double t0,
                                 double h0, double tau) {
  const std::size_t n = v.size();
  other_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    other_[j] = r_nodes_[j] >= h0 ? 0.0 : interpolate_uniform(u, ds_ * h0, r_nodes_[j], 0.0);
  }
  for (int q = 0; q < 3; ++q) {
    const double t = t0 + 0.25 * tau * q;
    a_[q].resize(n);
    b_[q].resize(n);
    c_[q].resize(n);
    params_.m2.sample(t, r_nodes_, a_[q]);
    params_.b2.sample(t, r_nodes_, b_[q]);
    params_.c2.sample(t, r_nodes_, c_[q]);
    for (std::size_t j = 0; j < n; ++j) a_[q][j] -= c_[q][j] * other_[j];
  }
  logistic_substep(v, 0.5 * tau, a_[0], a_[1], a_[2], b_[0], b_[1], b_[2]);
}

void FreeBoundarySolver::substep(SimulationState& s, double tau, double hp) {
  const double t0 = s.t;
  const double h0 = s.h;
  const double h1 = h0 + tau * hp;
  const double hm = 0.5 * (h0 + h1);

  // first half reactions, both from the start-of-step profiles
  if (coupled_) frozen_ = s.u;
  react_u(s.u, s.v, t0, h0, hp, tau);
  if (coupled_) react_v(s.v, frozen_, t0, h0, tau);

  // diffusion and advection with the operator frozen at the midpoint front
  adv_.resize(s.u.size());
  for (std::size_t i = 0; i < adv_.size(); ++i) adv_[i] = s_nodes_[i] * hp / hm;
  const auto op = build_radial_operator(config_.Ns, ds_, params_.N, params_.d1 / (hm * hm),
                                        LeftBoundary::Symmetry, RightBoundary::Dirichlet, adv_);
  TrBdf2 u_stepper(op.matrix, tau);
  u_stepper.step(std::span<double>(s.u.data(), s.u.size() - 1));
  s.u.back() = 0.0;
  if (coupled_) {
    if (tau != v_tau_) {
      v_stepper_.reset(v_operator_, tau);
      v_tau_ = tau;
    }
    v_stepper_.step(s.v);
  }

  s.h = h1;
  s.t = t0 + tau;
  const double tm = t0 + 0.5 * tau;
  if (coupled_) frozen_ = s.u;
  react_u(s.u, s.v, tm, hm, hp, tau);
  if (coupled_) react_v(s.v, frozen_, tm, h1, tau);
}

void FreeBoundarySolver::step(SimulationState& s) {
  if (s.h >= 0.9 * config_.R_out) {
    std::ostringstream os;
    os << "front h = " << s.h << " reached 0.9 R_out at t = " << s.t;
    fail(ErrorKind::DomainExhausted, os.str());
  }
  const double dt = config_.dt(params_.T);
  const double t_start = s.t;
  const double t_next = static_cast<double>(s.step_index + 1) * dt;
  double hp = front_speed(s.u, s.h);
  // Courant number of the s h'/h advection at s = 1
  const int n = std::max(1, static_cast<int>(std::ceil(hp * dt / (s.h * ds_) - 1e-12)));
  const double tau = (t_next - t_start) / n;
  for (int k = 0; k < n; ++k) {
    if (hp < 0.0) {
      std::ostringstream os;
      os << "front receding (h' = " << hp << ") at t = " << s.t;
      fail(ErrorKind::StabilityFailure, os.str());
    }
    substep(s, tau, hp);
    for (auto* field : {&s.u, &s.v}) {
      for (auto& x : *field) {
        if (x < 0.0) {
          if (x < -config_.negativity_tolerance || !std::isfinite(x)) {
            std::ostringstream os;
            os << "negative density " << x << " at t = " << s.t;
            fail(ErrorKind::StabilityFailure, os.str());
          }
          x = 0.0;
        } else if (!std::isfinite(x)) {
          fail(ErrorKind::StabilityFailure, "non-finite density");
        }
      }
    }
    const double su = sup(s.u);
    if (su > u_limit_) {
      std::ostringstream os;
      os << "sup u = " << su << " exceeds 2 C1 = " << u_limit_ << " at t = " << s.t;
      fail(ErrorKind::StabilityFailure, os.str());
    }
    hp = front_speed(s.u, s.h);
  }
  s.t = t_next;
  s.dhdt = hp;
  s.substeps = n;
  ++s.step_index;
}

SimulationState step(const SimulationState& state, const ModelParams& params, const SolverConfig& config) {
  FreeBoundarySolver solver(params, config, !state.v.empty());
  auto next = state;
  solver.step(next);
  return next;
}

namespace {

TrajectoryRecord record_of(const SimulationState& s) {
  return {s.t, s.h, s.dhdt, sup(s.u), sup(s.v), inf(s.u), inf(s.v)};
}

Snapshot snapshot_of(const SimulationState& s) { return {s.t, s.h, s.u, s.v}; }

}  // namespace

Trajectory run_simulation(const ModelParams& params, const SolverConfig& config, const StepHook& hook,
                          bool coupled) {
  FreeBoundarySolver solver(params, config, coupled);
  Trajectory traj;
  traj.config = config;
  traj.period = params.T;
  traj.coupled = coupled;
  auto s = initial_state(params, config, coupled);
  s.dhdt = solver.front_speed(s.u, s.h);
  traj.records.push_back(record_of(s));
  traj.snapshots.push_back(snapshot_of(s));

  const long total = static_cast<long>(std::ceil(config.t_end / config.dt(params.T) - 1e-9));
  const long per_snapshot = static_cast<long>(config.snapshot_every) * config.steps_per_period;
  while (s.step_index < total) {
    if (interrupt_flag().load()) {
      traj.termination = Termination::Interrupted;
      traj.message = "interrupted";
      break;
    }
    try {
      solver.step(s);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::StabilityFailure) {
        traj.termination = Termination::StabilityFailure;
      } else if (e.kind() == ErrorKind::DomainExhausted) {
        traj.termination = Termination::DomainExhausted;
      } else {
        throw;
      }
      traj.message = e.what();
      break;
    }
    traj.records.push_back(record_of(s));
    if (per_snapshot > 0 && s.step_index % per_snapshot == 0) traj.snapshots.push_back(snapshot_of(s));
    if (hook && hook(traj, s)) {
      traj.termination = Termination::Stopped;
      break;
    }
  }
  if (traj.snapshots.back().t != s.t) traj.snapshots.push_back(snapshot_of(s));
  traj.final_state = std::move(s);
  return traj;
}

namespace {

Trajectory checked(Trajectory traj) {
  if (traj.termination == Termination::StabilityFailure) fail(ErrorKind::StabilityFailure, traj.message);
  if (traj.termination == Termination::DomainExhausted) fail(ErrorKind::DomainExhausted, traj.message);
  if (traj.termination == Termination::Interrupted) fail(ErrorKind::Interrupted, traj.message);
  return traj;
}

}  // namespace

Trajectory simulate(const ModelParams& params, const SolverConfig& config, const StepHook& hook) {
  return checked(run_simulation(params, config, hook, true));
}

Trajectory scalar_free_boundary(const ModelParams& params, const SolverConfig& config,
                                const StepHook& hook) {
  return checked(run_simulation(params, config, hook, false));
}

BoundsReport verify_bounds(const Trajectory& traj, const ModelParams& params, double epsilon) {
  BoundsReport rep;
  rep.bounds = apriori_bounds(params, traj.config.R_out);
  rep.epsilon = epsilon;
  rep.min_dhdt = INFINITY;
  const auto& b = rep.bounds;
  const double neg = traj.config.negativity_tolerance;
  double prev_h = -INFINITY;
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const auto& r = traj.records[k];
    std::ostringstream os;
    os << "record " << k << " (t = " << r.t << "): ";
    if (r.u_min < -neg || r.u_max > b.C1 * (1.0 + epsilon)) {
      os << "u in [" << r.u_min << ", " << r.u_max << "], C1 = " << b.C1;
      fail(ErrorKind::BoundViolation, os.str());
    }
    if (traj.coupled && (r.v_min < -neg || r.v_max > b.C2 * (1.0 + epsilon))) {
      os << "v in [" << r.v_min << ", " << r.v_max << "], C2 = " << b.C2;
      fail(ErrorKind::BoundViolation, os.str());
    }
    if (!(r.dhdt > 0.0) || r.dhdt > b.C3 * (1.0 + epsilon)) {
      os << "h' = " << r.dhdt << ", C3 = " << b.C3;
      fail(ErrorKind::BoundViolation, os.str());
    }
    if (r.h < prev_h) {
      os << "front moved back from " << prev_h << " to " << r.h;
      fail(ErrorKind::BoundViolation, os.str());
    }
    prev_h = r.h;
    rep.max_u = std::max(rep.max_u, r.u_max);
    rep.max_v = std::max(rep.max_v, r.v_max);
    rep.max_dhdt = std::max(rep.max_dhdt, r.dhdt);
    rep.min_dhdt = std::min(rep.min_dhdt, r.dhdt);
  }
  rep.records = traj.records.size();
  return rep;
}

OrderingReport compare_runs(const Trajectory& low, const Trajectory& high, CompareMode mode) {
  require(std::abs(low.period - high.period) <= 1e-12 * low.period, "runs must share the period");
  require(low.config.Ns == high.config.Ns && low.config.steps_per_period == high.config.steps_per_period,
          "runs must share the grid configuration");
  OrderingReport rep;
  const double ds = low.ds();
  auto same_time = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)); };

  std::size_t j = 0;
  for (const auto& a : low.records) {
    while (j < high.records.size() && high.records[j].t < a.t && !same_time(high.records[j].t, a.t)) ++j;
    if (j >= high.records.size()) break;
    const auto& b = high.records[j];
    if (!same_time(a.t, b.t)) continue;
    ++rep.shared_times;
    const double excess = a.h - b.h;
    rep.max_front_excess = std::max(rep.max_front_excess, excess);
    const double tol = 2.0 * std::max(a.h, b.h) * ds;
    if (excess > tol) {
      std::ostringstream os;
      os << "h_low = " << a.h << " > h_high = " << b.h << " + " << tol << " at t = " << a.t;
      fail(ErrorKind::OrderingViolation, os.str());
    }
  }
  if (mode == CompareMode::FrontOnly) return rep;

  std::size_t k = 0;
  for (const auto& a : low.snapshots) {
    while (k < high.snapshots.size() && high.snapshots[k].t < a.t && !same_time(high.snapshots[k].t, a.t)) ++k;
    if (k >= high.snapshots.size()) break;
    const auto& b = high.snapshots[k];
    if (!same_time(a.t, b.t)) continue;
    const double tol = 2.0 * std::max(a.h, b.h) * ds;
    // u on the low run's radii
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      const double r = static_cast<double>(i) * ds * a.h;
      const double ub = interpolate_uniform(b.u, ds * b.h, r, 0.0);
      const double excess = a.u[i] - ub;
      rep.max_u_excess = std::max(rep.max_u_excess, excess);
      if (excess > tol) {
        std::ostringstream os;
        os << "u_low = " << a.u[i] << " > u_high = " << ub << " + " << tol << " at t = " << a.t << ", r = " << r;
        fail(ErrorKind::OrderingViolation, os.str());
      }
    }
    if (!a.v.empty() && a.v.size() == b.v.size()) {
      for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double excess = b.v[i] - a.v[i];
        rep.max_v_excess = std::max(rep.max_v_excess, excess);
        if (excess > tol) {
          std::ostringstream os;
          os << "v_high = " << b.v[i] << " > v_low = " << a.v[i] << " + " << tol << " at t = " << a.t;
          fail(ErrorKind::OrderingViolation, os.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace stefan
