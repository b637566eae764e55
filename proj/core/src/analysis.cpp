#include "stefan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stefan/error.hpp"
#include "stefan/parallel.hpp"
#include "stefan/periodic_ode.hpp"

namespace stefan {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Spreading: return "Spreading";
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

double effective_threshold_radius(const ModelParams& params, const RadialPeriodicField& V,
                                  double inflation, double search_max,
                                  const EigenSettings& settings) {
  const auto field = effective_u_growth(params, V, inflation);
  const auto th = threshold_radius(params.d1, field, params.T, params.N, search_max, settings);
  return th.bounded ? th.value : INFINITY;
}

// ---------------------------------------------------------------------------

namespace {

double sup_of(const std::vector<double>& x) {
  return x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
}

}  // namespace

DichotomyMonitor::DichotomyMonitor(const ModelParams& params, const SolverConfig& config,
                                   double h_star, const ClassifyOptions& options)
    : options_(options), steps_per_period_(config.steps_per_period), last_h_(params.h0()) {
  verdict_.h_star_used = h_star;
  verdict_.evidence.tol_u = options.tol_u_factor * apriori_bounds(params, config.R_out).C1;
  verdict_.evidence.tol_h = options.tol_h_factor * params.h0();
  // the initial front may already be past h*
  observe(0, 0.0, params.h0(), params.init.u_sup());
}

bool DichotomyMonitor::observe(const SimulationState& state) {
  return observe(state.step_index, state.t, state.h, sup_of(state.u));
}

bool DichotomyMonitor::observe(long step_index, double t, double h, double sup_u) {
  if (decided()) return true;
  auto& ev = verdict_.evidence;
  if (h > verdict_.h_star_used) {
    ev.radius_crossed = true;
    ev.t_crossed = t;
    verdict_.kind = Verdict::Spreading;
    verdict_.t_decided = t;
    verdict_.note = "front passed h*";
    return true;
  }
  if (step_index == 0 || step_index % steps_per_period_ != 0) return false;
  ev.sup_u.push_back(sup_u);
  ev.dh.push_back(h - last_h_);
  last_h_ = h;
  ev.stall_run = (sup_u < ev.tol_u && ev.dh.back() < ev.tol_h) ? ev.stall_run + 1 : 0;
  if (ev.stall_run >= options_.stall_periods &&
      ev.sup_u.size() >= static_cast<std::size_t>(options_.min_periods)) {
    verdict_.kind = Verdict::Vanishing;
    verdict_.t_decided = t;
    verdict_.note = "invader decayed and front stalled";
    return true;
  }
  return false;
}

DichotomyVerdict DichotomyMonitor::verdict() const {
  DichotomyVerdict out = verdict_;
  if (out.kind == Verdict::Inconclusive) {
    std::ostringstream os;
    os << "undecided after " << out.evidence.sup_u.size() << " periods";
    if (out.evidence.sup_u.size() < static_cast<std::size_t>(options_.min_periods)) {
      os << " (a vanishing verdict needs " << options_.min_periods << ")";
    }
    os << "; extend t_end";
    out.note = os.str();
  }
  return out;
}

StepHook DichotomyMonitor::hook() {
  return [this](const Trajectory&, const SimulationState& s) { return observe(s); };
}

DichotomyVerdict classify(const Trajectory& traj, const ModelParams& params, double h_star,
                          const ClassifyOptions& options) {
  DichotomyMonitor monitor(params, traj.config, h_star, options);
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const auto& r = traj.records[k];
    if (monitor.observe(static_cast<long>(k), r.t, r.h, r.u_max)) break;
  }
  return monitor.verdict();
}

DichotomyVerdict classify(const Trajectory& traj, const ModelParams& params,
                          const RadialPeriodicField& V, const ClassifyOptions& options,
                          const EigenSettings& settings) {
  const double h_star = effective_threshold_radius(params, V, 1.0, 0.9 * traj.config.R_out, settings);
  return classify(traj, params, h_star, options);
}

ClassifiedRun run_and_classify(const ModelParams& params, const SolverConfig& config, double h_star,
                               const ClassifyOptions& options, int max_doublings) {
  SolverConfig cfg = config;
  cfg.snapshot_every = 0;
  ClassifiedRun out;
  for (int attempt = 0;; ++attempt) {
    DichotomyMonitor monitor(params, cfg, h_star, options);
    const auto traj = run_simulation(params, cfg, monitor.hook(), true);
    if (traj.termination == Termination::StabilityFailure) fail(ErrorKind::StabilityFailure, traj.message);
    if (traj.termination == Termination::Interrupted) fail(ErrorKind::Interrupted, traj.message);
    out.verdict = monitor.verdict();
    out.t_end = cfg.t_end;
    out.h_final = traj.final_state.h;
    out.termination = traj.termination;
    if (monitor.decided() || attempt >= max_doublings ||
        traj.termination == Termination::DomainExhausted) {
      if (traj.termination == Termination::DomainExhausted && !monitor.decided()) {
        out.verdict.note = "domain exhausted before h*; enlarge R_out";
      }
      return out;
    }
    cfg.t_end *= 2.0;
  }
}

// ---------------------------------------------------------------------------

Dial mu_dial() {
  return [](const ModelParams& p, double x) {
    ModelParams q = p;
    q.mu = x;
    return q;
  };
}

Dial h0_dial() {
  return [](const ModelParams& p, double x) {
    ModelParams q = p;
    q.init.h0 = x;
    return q;
  };
}

Dial d1_dial() {
  return [](const ModelParams& p, double x) {
    ModelParams q = p;
    q.d1 = x;
    return q;
  };
}

Dial eps_dial() {
  return [](const ModelParams& p, double x) {
    ModelParams q = p;
    q.init.u0 = p.init.u0.scaled(x);
    return q;
  };
}

EntireSolution analysis_resident(const ModelParams& params, const ThresholdOptions& options) {
  const double r_out = options.entire_r_out > 0.0
                           ? options.entire_r_out
                           : default_entire_radius({&params.m2, &params.b2});
  const int grid = options.entire_grid > 0 ? options.entire_grid
                                           : std::max(64, static_cast<int>(std::lround(r_out / 0.02)));
  return resident_steady_state(params, r_out, grid);
}

ThresholdInterval find_threshold(const ModelParams& params, const SolverConfig& config,
                                 const Dial& dial, double lo, double hi,
                                 const ThresholdOptions& options) {
  require(lo < hi, "threshold bracket must be increasing");
  config.validate(params);
  ThresholdInterval out;
  const auto V = analysis_resident(params, options);
  const auto constants = envelope_constants(params, V.field);
  const double search_max = 0.9 * config.R_out;
  out.h_star = effective_threshold_radius(params, V.field, 1.0, search_max, options.eigen);
  out.h_star_inflated =
      effective_threshold_radius(params, V.field, 1.0 + constants.H, search_max, options.eigen);
  if (params.h0() >= out.h_star_inflated) {
    out.degenerate_zero = true;
    return out;
  }

  auto eval = [&](double x) {
    const auto run = run_and_classify(dial(params, x), config, out.h_star, options.classify,
                                      options.max_doublings);
    out.evaluations.push_back({x, run.verdict.kind, run.t_end});
    return run.verdict.kind;
  };
  const auto v_lo = eval(lo);
  const auto v_hi = eval(hi);
  if (v_lo != Verdict::Vanishing || v_hi != Verdict::Spreading) {
    std::ostringstream os;
    os << "bracket [" << lo << ", " << hi << "] gives " << to_string(v_lo) << " / " << to_string(v_hi);
    fail(ErrorKind::NoBracket, os.str());
  }
  const double target = options.rel_width * (hi - lo);
  while (hi - lo > target) {
    const double mid = 0.5 * (lo + hi);
    const auto v = eval(mid);
    if (v == Verdict::Spreading) {
      hi = mid;
    } else if (v == Verdict::Vanishing) {
      lo = mid;
    } else {
      out.widened = true;
      break;
    }
  }
  out.lower = lo;
  out.upper = hi;
  return out;
}

ThresholdInterval find_mu_star(const ModelParams& params, const SolverConfig& config, double lo,
                               double hi, const ThresholdOptions& options) {
  return find_threshold(params, config, mu_dial(), lo, hi, options);
}

ThresholdInterval find_eps_star(const ModelParams& params, const SolverConfig& config, double lo,
                                double hi, const ThresholdOptions& options) {
  return find_threshold(params, config, eps_dial(), lo, hi, options);
}

std::vector<ClassifiedRun> verdict_scan(const ModelParams& params, const SolverConfig& config,
                                        const Dial& dial, const std::vector<double>& values,
                                        double h_star, const ClassifyOptions& options,
                                        int max_doublings) {
  return parallel_map(values.size(), [&](std::size_t i) {
    return run_and_classify(dial(params, values[i]), config, h_star, options, max_doublings);
  });
}

bool verdicts_monotone(const std::vector<ClassifiedRun>& runs) {
  bool spread = false;
  for (const auto& r : runs) {
    if (r.verdict.kind == Verdict::Spreading) spread = true;
    if (r.verdict.kind == Verdict::Vanishing && spread) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

SpeedBounds speed_bounds(const ModelParams& params, const SemiWaveOptions& options) {
  const auto env = resident_envelopes(params);
  const double T = params.T;
  const int n = 256;
  const auto& Vu = env.upper.V;
  auto a_lo = PeriodicScalarFunction::sample(T, n, [&](double t) {
    return params.m1.liminf_or_lower()(t) - params.c1.upper()(t) * Vu(t);
  });
  const auto& b_lo = params.b1.upper();
  const auto& a_hi = params.m1.limsup_or_upper();
  const auto& b_hi = params.b1.lower();
  SpeedBounds out;
  // the lower composite takes V^* itself rather than V^* + eps, eps -> 0
  out.note = "lower bound evaluated at V^* with no epsilon margin";
  out.upper_wave = semiwave_k0(params.mu, a_hi, b_hi, params.d1, options);
  out.upper = out.upper_wave.mean_K0;
  try {
    out.lower_wave = semiwave_k0(params.mu, a_lo, b_lo, params.d1, options);
    out.lower = out.lower_wave.mean_K0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoSemiWave) throw;
    out.lower = 0.0;
    out.lower_flagged = true;
    out.note += std::string("; lower composite has no semi-wave: ") + e.what();
  }
  return out;
}

SpeedFit measure_speed(const Trajectory& traj, double window) {
  require(window > 0.0, "speed window must be positive");
  const auto& rec = traj.records;
  const double span = rec.empty() ? 0.0 : rec.back().t - rec.front().t;
  if (span + 1e-9 * traj.period < 3.0 * window * traj.period) {
    std::ostringstream os;
    os << "trajectory spans " << span / traj.period << " periods, need " << 3.0 * window;
    fail(ErrorKind::InsufficientData, os.str());
  }
  const double t0 = rec.back().t - window * traj.period - 1e-9 * traj.period;
  double st = 0, sh = 0, stt = 0, sth = 0;
  std::size_t n = 0;
  for (const auto& r : rec) {
    if (r.t < t0) continue;
    st += r.t;
    sh += r.h;
    stt += r.t * r.t;
    sth += r.t * r.h;
    ++n;
  }
  if (n < 3) fail(ErrorKind::InsufficientData, "fewer than three samples in the speed window");
  SpeedFit fit;
  const double nn = static_cast<double>(n);
  const double mt = st / nn, mh = sh / nn;
  fit.slope = (sth - nn * mt * mh) / (stt - nn * mt * mt);
  fit.intercept = mh - fit.slope * mt;
  double ss = 0.0;
  for (const auto& r : rec) {
    if (r.t < t0) continue;
    const double e = r.h - (fit.intercept + fit.slope * r.t);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / nn);
  fit.window = window;
  fit.samples = n;
  return fit;
}

}  // namespace stefan
