#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "stefan/model.hpp"
#include "stefan/numerics.hpp"

namespace stefan {

struct SolverConfig {
  int Ns = 256;               // intervals on s = r/h in [0, 1]
  int Nr = 1024;              // intervals on [0, R_out] for the resident
  int steps_per_period = 256;  // dt = T / steps_per_period
  double R_out = 40.0;
  double t_end = 50.0;
  int snapshot_every = 1;  // periods between profile snapshots; 0 keeps only the ends
  double negativity_tolerance = 1e-12;

  double dt(double T) const { return T / steps_per_period; }
  void validate(const ModelParams& params) const;
};

struct SimulationState {
  double t = 0.0;
  double h = 0.0;
  double dhdt = 0.0;
  std::vector<double> u;  // Ns + 1 samples on s_i = i/Ns, u[Ns] = 0
  std::vector<double> v;  // Nr + 1 samples on r_j = j*R_out/Nr (empty in scalar runs)
  long step_index = 0;
  int substeps = 0;  // CFL substeps used by the last step
};

struct TrajectoryRecord {
  double t = 0.0;
  double h = 0.0;
  double dhdt = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;
  double u_min = 0.0;  // before clamping roundoff negatives
  double v_min = 0.0;
};

struct Snapshot {
  double t = 0.0;
  double h = 0.0;
  std::vector<double> u;  // on r = s_i * h
  std::vector<double> v;  // on the fixed resident grid
};

enum class Termination { Completed, Stopped, StabilityFailure, DomainExhausted, Interrupted };
const char* to_string(Termination t);

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::Completed;
  std::string message;
  SolverConfig config;
  double period = 1.0;
  bool coupled = true;
  SimulationState final_state;

  double ds() const { return 1.0 / config.Ns; }
  double dr() const { return config.R_out / config.Nr; }
};

/// Called after every accepted step; returning true ends the run with
/// Termination::Stopped.
using StepHook = std::function<bool(const Trajectory&, const SimulationState&)>;

/// Initial state from params.init on the solver grids.
SimulationState initial_state(const ModelParams& params, const SolverConfig& config,
                              bool coupled = true);

/// Moving-front stepper. u lives on s = r/h in [0, 1] (front fixing); the
/// transformed equation
///   u_t = d1/h^2 (u_ss + (N-1)/s u_s) + (s h'/h) u_s + u (m1 - b1 u - c1 v)
/// is Strang split: exact-in-space logistic half steps around one TR-BDF2
/// step of the diffusion-advection operator frozen at the midpoint front.
/// The resident is split the same way on its fixed grid with zero flux at
/// R_out. The front moves by forward Euler with h' = mu (4 u_{N-1} - u_{N-2}) /
/// (2 ds h), and each step is cut into substeps keeping the advective Courant
/// number at s = 1 below one.
class FreeBoundarySolver {
 public:
  FreeBoundarySolver(ModelParams params, SolverConfig config, bool coupled = true);

  /// Advances one dt. Throws StabilityFailure (sup u > 2 C1, negativity past
  /// tolerance, receding front) or DomainExhausted (h >= 0.9 R_out).
  void step(SimulationState& state);

  double front_speed(const std::vector<double>& u, double h) const;
  const ModelParams& params() const { return params_; }
  const SolverConfig& config() const { return config_; }
  bool coupled() const { return coupled_; }
  double u_limit() const { return u_limit_; }

 private:
  void substep(SimulationState& s, double tau, double hp);
  void react_u(std::vector<double>& u, const std::vector<double>& v, double t0, double h0, double hp,
               double tau);
  void react_v(std::vector<double>& v, const std::vector<double>& u, double t0, double h0, double tau);

  ModelParams params_;
  SolverConfig config_;
  bool coupled_;
  double ds_, dr_, u_limit_;
  std::vector<double> s_nodes_, r_nodes_;
  // scratch
  std::vector<double> pos_[3], a_[3], b_[3], c_[3], other_, adv_, frozen_;
  Tridiagonal v_operator_;
  TrBdf2 v_stepper_;
  double v_tau_ = -1.0;
};

/// One step of the coupled system, for callers without a solver instance.
SimulationState step(const SimulationState& state, const ModelParams& params,
                     const SolverConfig& config);

/// Runs until t_end, a hook stop, or a step failure; failures end the run and
/// are recorded in the termination fields instead of thrown.
Trajectory run_simulation(const ModelParams& params, const SolverConfig& config,
                          const StepHook& hook = {}, bool coupled = true);

/// As run_simulation, but step failures propagate as errors.
Trajectory simulate(const ModelParams& params, const SolverConfig& config, const StepHook& hook = {});

/// The single-species problem: the resident is dropped and v is taken as 0.
Trajectory scalar_free_boundary(const ModelParams& params, const SolverConfig& config,
                                const StepHook& hook = {});

/// Set from a signal handler to stop runs at the next step boundary.
std::atomic<bool>& interrupt_flag();

struct AprioriBounds {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double M = 0.0;
};

/// C1 = max(||m1|| / min b1, ||u0||), C2 likewise for the resident,
/// M = max(1/h0, sqrt(||m1|| / (2 d1)), 4 ||u0||_{C^1} / (3 C1)), C3 = 2 M C1 mu.
AprioriBounds apriori_bounds(const ModelParams& params, double r_max);

struct BoundsReport {
  AprioriBounds bounds;
  double epsilon = 1e-6;
  double max_u = 0.0, max_v = 0.0, max_dhdt = 0.0, min_dhdt = 0.0;
  std::size_t records = 0;
};

/// Checks 0 <= u <= C1 (1 + eps), 0 <= v <= C2 (1 + eps), 0 < h' <= C3 (1 + eps)
/// and nondecreasing h at every record. Throws BoundViolation at the first
/// offending record.
BoundsReport verify_bounds(const Trajectory& traj, const ModelParams& params, double epsilon = 1e-6);

enum class CompareMode { FrontOnly, Full };

struct OrderingReport {
  std::size_t shared_times = 0;
  double max_front_excess = -INFINITY;  // max of h_low - h_high
  double max_u_excess = -INFINITY;
  double max_v_excess = -INFINITY;
};

/// Comparison-principle ordering: h_low <= h_high + 2 h ds at shared record times; in
/// Full mode also u_low <= u_high + tol and v_high <= v_low + tol at shared
/// snapshots. Throws OrderingViolation with the first witness.
OrderingReport compare_runs(const Trajectory& low, const Trajectory& high, CompareMode mode);

}  // namespace stefan
