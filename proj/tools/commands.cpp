#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "io/config.hpp"
#include "io/output.hpp"
#include "json.hpp"
#include "stefan/analysis.hpp"
#include "stefan/eigensolver.hpp"
#include "stefan/entire_solutions.hpp"
#include "stefan/error.hpp"
#include "stefan/fbsolver.hpp"
#include "stefan/numerics.hpp"
#include "stefan/parallel.hpp"
#include "stefan/periodic_ode.hpp"

namespace stefan::cli {

using json = nlohmann::json;

namespace {

// --- shared plumbing ------------------------------------------------------

io::RunConfig load(const Common& c) {
  if (c.config.empty()) fail(ErrorKind::InvalidArgument, "--config is required");
  auto sets = c.sets;
  if (c.t_end > 0.0) sets.push_back("solver.t_end=" + io::format_number(c.t_end));
  return io::load_config(c.config, sets);
}

std::string prefix_for(const Common& c, const std::string& name) { return c.out.empty() ? name : c.out; }

json echo(const io::RunConfig& rc) { return json::parse(rc.canonical); }

std::string inputs_hash(const io::RunConfig* rc, const json& flags) {
  return io::sha256_hex((rc ? rc->canonical : std::string()) + flags.dump());
}

// JSON numbers cannot be inf/nan; those are written as strings.
json jnum(double x) {
  if (std::isfinite(x)) return x;
  return io::format_number(x);
}

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"t", w->t}, {"r", w->r}, {"value", w->value}};
}

json verdict_json(const DichotomyVerdict& v) {
  return {{"kind", to_string(v.kind)},
          {"h_star_used", jnum(v.h_star_used)},
          {"t_decided", v.t_decided},
          {"note", v.note},
          {"evidence",
           {{"radius_crossed", v.evidence.radius_crossed},
            {"t_crossed", v.evidence.t_crossed},
            {"tol_u", v.evidence.tol_u},
            {"tol_h", v.evidence.tol_h},
            {"stall_run", v.evidence.stall_run},
            {"sup_u_by_period", v.evidence.sup_u},
            {"dh_by_period", v.evidence.dh}}}};
}

json solver_json(const SolverConfig& s) {
  return {{"Ns", s.Ns}, {"Nr", s.Nr}, {"steps_per_period", s.steps_per_period}, {"R_out", s.R_out},
          {"t_end", s.t_end}, {"negativity_tolerance", s.negativity_tolerance}};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int finish(io::OutputSet& out, int code) {
  const auto m = out.write_manifest(code);
  std::cerr << "manifest: " << m << "\n";
  return code;
}

double resident_h_star(const io::RunConfig& rc, const ModelParams& p) {
  const auto V = analysis_resident(p, rc.threshold);
  return effective_threshold_radius(p, V.field, 1.0, 0.9 * rc.solver.R_out, rc.eigen);
}

void write_trajectory(io::OutputSet& out, const Trajectory& traj, bool svg) {
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.records.size());
  for (const auto& r : traj.records) rows.push_back({r.t, r.h, r.dhdt, r.u_max, r.v_max});
  out.csv_file("trajectory.csv", {"t", "h", "dhdt", "u_max", "v_max"}, rows);
  if (svg) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : traj.records) pts.emplace_back(r.t, r.h);
    out.text_file("front.svg", io::svg_line_plot(pts, "t", "h(t)", "free boundary"));
  }
}

// Union of the moving u grid and the fixed v grid, u extended by zero past h.
void write_snapshots(io::OutputSet& out, const Trajectory& traj) {
  const double ds = traj.ds(), dr = traj.dr();
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    std::vector<std::vector<double>> rows;
    auto v_at = [&](double r) { return s.v.empty() ? 0.0 : interpolate_uniform(s.v, dr, r, s.v.back()); };
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      const double r = static_cast<double>(i) * ds * s.h;
      rows.push_back({r, s.u[i], v_at(r)});
    }
    for (std::size_t j = 0; j < s.v.size(); ++j) {
      const double r = static_cast<double>(j) * dr;
      if (r > s.h) rows.push_back({r, 0.0, s.v[j]});
    }
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
    out.csv_file(name, {"r", "u", "v"}, rows);
  }
}

int termination_code(Termination t) {
  switch (t) {
    case Termination::Completed:
    case Termination::Stopped: return kOk;
    case Termination::DomainExhausted: return kDomain;
    default: return kNumerical;
  }
}

// --- check ------------------------------------------------------------------

int run_check(const Common& c) {
  const auto rc = load(c);
  const auto& p = rc.params;
  io::OutputSet out(prefix_for(c, "check"), "check", inputs_hash(&rc, {}));
  json report;

  const auto h1 = check_H1(p, rc.checks);
  std::cout << "(H1) " << (h1.pass ? "pass" : "FAIL") << "\n";
  json clauses = json::array();
  for (const auto& cl : h1.clauses) {
    std::cout << "  " << (cl.pass ? "ok   " : "FAIL ") << cl.name;
    if (!cl.detail.empty()) std::cout << "  " << cl.detail;
    if (cl.witness) std::cout << "  at t=" << cl.witness->t << " r=" << cl.witness->r << " value=" << cl.witness->value;
    std::cout << "\n";
    clauses.push_back({{"name", cl.name}, {"pass", cl.pass}, {"detail", cl.detail}, {"witness", witness_json(cl.witness)}});
  }
  report["H1"] = {{"pass", h1.pass}, {"clauses", clauses}};

  const auto probes = default_probe_radii(p.h0());
  for (const auto& [name, field] : {std::pair{"m1", &p.m1}, std::pair{"m2", &p.m2}}) {
    try {
      const auto h2 = check_H2(*field, probes);
      std::cout << "(H2) " << name << ": " << (h2.pass ? "pass" : "FAIL") << "  liminf=" << h2.liminf
                << " limsup=" << h2.limsup << "\n";
      report["H2"][name] = {{"pass", h2.pass}, {"liminf", h2.liminf}, {"limsup", h2.limsup}};
    } catch (const Error& e) {
      std::cout << "(H2) " << name << ": not stabilized (" << e.what() << ")\n";
      report["H2"][name] = {{"pass", false}, {"error", e.what()}};
    }
  }

  try {
    const auto V = analysis_resident(p, rc.threshold);
    const auto env = resident_envelopes(p);
    const auto k = envelope_constants(p, V.field);
    const auto h3 = check_H3(p, env.upper.V, k);
    std::cout << "(H3) " << (h3.pass ? "pass" : "FAIL") << "  margin=" << h3.margin << " at t=" << h3.argmin_t
              << "  (H=" << k.H << ", K=" << k.K << ")\n";
    report["H3"] = {{"pass", h3.pass}, {"margin", h3.margin}, {"argmin_t", h3.argmin_t}, {"H", k.H}, {"K", k.K},
                    {"truncation_flag", k.truncation_flag}};
  } catch (const Error& e) {
    std::cout << "(H3) not evaluated: " << e.what() << "\n";
    report["H3"] = {{"pass", false}, {"error", e.what()}};
  }

  const auto env = classify_environment(p, rc.checks);
  const char* tag = env == Environment::Strong ? "(Hs) strong" : env == Environment::Weak ? "(Hw) weak" : "neither";
  std::cout << "environment: " << tag << "\n";
  report["environment"] = to_string(env);
  report["config"] = echo(rc);
  out.json_file("check.json", report);
  return finish(out, kOk);
}

// --- eigen --------------------------------------------------------------------

struct EigenArgs {
  double d = 1.0, R = 1.0, T = 1.0;
  int N = 1, grid = 256, steps = 256;
  std::string m, coef;
  bool snapshot = false, critical = false;
} eigen_args;

int run_eigen(const Common& c) {
  const auto& a = eigen_args;
  std::optional<io::RunConfig> rc;
  CoefficientField m;
  double T = a.T, d = a.d;
  int N = a.N;
  if (!a.coef.empty()) {
    rc = load(c);
    const auto& p = rc->params;
    const std::map<std::string, const CoefficientField*> fields = {
        {"m1", &p.m1}, {"m2", &p.m2}, {"b1", &p.b1}, {"b2", &p.b2}, {"c1", &p.c1}, {"c2", &p.c2}};
    if (!fields.count(a.coef)) fail(ErrorKind::InvalidArgument, "--coef must name a coefficient");
    m = *fields.at(a.coef);
    T = p.T;
    N = p.N;
  } else {
    if (a.m.empty()) fail(ErrorKind::InvalidArgument, "give --m or --coef with --config");
    m = io::parse_coefficient(a.m, T);
  }
  const json flags = {{"d", d}, {"R", a.R}, {"T", T}, {"N", N}, {"grid", a.grid}, {"steps", a.steps},
                      {"m", a.m}, {"coef", a.coef}, {"critical", a.critical}};
  io::OutputSet out(prefix_for(c, "eigen"), "eigen", inputs_hash(rc ? &*rc : nullptr, flags));
  EigenSettings settings;
  settings.grid = a.grid;
  settings.steps_per_period = a.steps;
  const auto res = principal_eigenvalue(settings.problem(d, m, a.R, T, N));
  json j = {{"lambda1", res.lambda1}, {"multiplier", res.multiplier}, {"iterations", res.iterations},
            {"rel_change", res.rel_change}, {"inputs", flags}};
  if (a.critical) {
    const auto th = threshold_radius(d, m, T, N, 1e3, settings);
    j["h_star"] = {{"bounded", th.bounded}, {"value", th.bounded ? json(th.value) : json("inf")},
                   {"lower", th.lower}, {"upper", th.upper}};
  }
  if (rc) j["config"] = echo(*rc);
  print(j);
  out.json_file("eigen.json", j);
  if (a.snapshot) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.phi0.size(); ++i) {
      rows.push_back({a.R * static_cast<double>(i) / static_cast<double>(res.phi0.size() - 1), res.phi0[i]});
    }
    out.csv_file("eigenfunction.csv", {"r", "phi"}, rows);
  }
  return finish(out, kOk);
}

// --- periodic-ode -------------------------------------------------------------

struct OdeArgs {
  std::string a, b;
  double T = 1.0;
  int nodes = 512;
} ode_args;

int run_periodic_ode(const Common& c) {
  const auto& a = ode_args;
  std::optional<io::RunConfig> rc;
  std::vector<std::pair<std::string, PeriodicLogisticSolution>> sols;
  json flags = {{"a", a.a}, {"b", a.b}, {"T", a.T}, {"nodes", a.nodes}};
  if (!a.a.empty() || !a.b.empty()) {
    if (a.a.empty() || a.b.empty()) fail(ErrorKind::InvalidArgument, "--a and --b go together");
    sols.emplace_back("V", solve_periodic_logistic(io::parse_time_function(a.a, a.T),
                                                   io::parse_time_function(a.b, a.T), a.nodes));
  } else {
    rc = load(c);
    const auto env = resident_envelopes(rc->params);
    sols.emplace_back("V_lower", env.lower);
    sols.emplace_back("V_upper", env.upper);
  }
  io::OutputSet out(prefix_for(c, "periodic_ode"), "periodic-ode", inputs_hash(rc ? &*rc : nullptr, flags));
  json j = {{"inputs", flags}};
  for (const auto& [name, s] : sols) {
    std::vector<std::vector<double>> rows;
    const double T = s.V.period();
    for (int k = 0; k <= s.nodes; ++k) {
      const double t = T * k / s.nodes;
      rows.push_back({t, s.V(t)});
    }
    out.csv_file(name + ".csv", {"t", "V"}, rows);
    j[name] = {{"mean_a", s.mean_a}, {"residual", s.residual}, {"periodicity_defect", s.periodicity_defect},
               {"nodes", s.nodes}, {"min", s.V.min()}, {"max", s.V.max()}, {"mean", s.V.mean()}};
  }
  if (rc) j["config"] = echo(*rc);
  print(j);
  out.json_file("periodic_ode.json", j);
  return finish(out, kOk);
}

// --- entire -------------------------------------------------------------------

struct EntireArgs {
  double r_out = 0.0;
  int grid = 0;
} entire_args;

int run_entire(const Common& c) {
  const auto rc = load(c);
  const auto& p = rc.params;
  const double r_out = entire_args.r_out > 0.0 ? entire_args.r_out : default_entire_radius({&p.m2, &p.b2});
  const int grid = entire_args.grid > 0 ? entire_args.grid : std::max(64, static_cast<int>(std::lround(r_out / 0.02)));
  const json flags = {{"r_out", r_out}, {"grid", grid}};
  io::OutputSet out(prefix_for(c, "entire"), "entire", inputs_hash(&rc, flags));
  const auto sol = resident_steady_state(p, r_out, grid);
  const auto env = resident_envelopes(p);
  const auto bounds = check_asymptotic_bounds(sol.field, env.lower.V, env.upper.V);
  const auto& f = sol.field;
  std::vector<std::vector<double>> rows;
  const int stride_t = std::max(1, f.time_samples() / 32);
  const int stride_r = std::max(1, f.intervals() / 256);
  for (int k = 0; k < f.time_samples(); k += stride_t) {
    for (int i = 0; i <= f.intervals(); i += stride_r) rows.push_back({f.time(k), f.radius(i), f.at(k, i)});
  }
  out.csv_file("field.csv", {"t", "r", "value"}, rows);
  json j = {{"periods", sol.periods},       {"residual", sol.residual},
            {"initial_level", sol.initial_level}, {"r_out", r_out},
            {"grid", grid},                 {"min", f.min()},
            {"max", f.max()},
            {"asymptotic_bounds",
             {{"pass", bounds.pass}, {"epsilon", bounds.epsilon}, {"lower_margin", bounds.lower_margin},
              {"upper_margin", bounds.upper_margin}}},
            {"config", echo(rc)}};
  print(j);
  out.json_file("entire.json", j);
  return finish(out, kOk);
}

// --- simulate -----------------------------------------------------------------

struct SimArgs {
  bool force = false;
  bool scalar = false;
} sim_args;

int run_simulate(const Common& c) {
  const auto rc = load(c);
  const auto& p = rc.params;
  if (!sim_args.force) {
    const auto h1 = check_H1(p, rc.checks);
    if (!h1.pass) fail(ErrorKind::InvalidArgument, "(H1) fails; run `check` or pass --force");
  }
  io::OutputSet out(prefix_for(c, "simulate"), "simulate", inputs_hash(&rc, {{"scalar", sim_args.scalar}}));
  const auto traj = run_simulation(p, rc.solver, {}, !sim_args.scalar);
  write_trajectory(out, traj, c.svg);
  write_snapshots(out, traj);

  json bounds;
  try {
    const auto b = verify_bounds(traj, p);
    bounds = {{"pass", true}, {"C1", b.bounds.C1}, {"C2", b.bounds.C2}, {"C3", b.bounds.C3},
              {"max_u", b.max_u}, {"max_v", b.max_v}, {"max_dhdt", b.max_dhdt}, {"min_dhdt", b.min_dhdt}};
  } catch (const Error& e) {
    bounds = {{"pass", false}, {"error", e.what()}};
  }
  const auto& last = traj.records.back();
  json j = {{"termination", to_string(traj.termination)},
            {"message", traj.message},
            {"t_final", last.t},
            {"h_final", last.h},
            {"u_max_final", last.u_max},
            {"v_max_final", last.v_max},
            {"records", traj.records.size()},
            {"snapshots", traj.snapshots.size()},
            {"bounds", bounds},
            {"solver", solver_json(rc.solver)},
            {"config", echo(rc)}};
  out.json_file("summary.json", j);
  std::cout << "termination: " << to_string(traj.termination) << "  t=" << last.t << "  h=" << last.h
            << "  bounds " << (bounds["pass"].get<bool>() ? "ok" : "VIOLATED") << "\n";
  if (!traj.message.empty()) std::cerr << traj.message << "\n";
  return finish(out, termination_code(traj.termination));
}

// --- classify -----------------------------------------------------------------

int run_classify(const Common& c) {
  const auto rc = load(c);
  const auto& p = rc.params;
  io::OutputSet out(prefix_for(c, "classify"), "classify", inputs_hash(&rc, {}));
  const double h_star = resident_h_star(rc, p);
  DichotomyMonitor monitor(p, rc.solver, h_star, rc.classify);
  const auto traj = run_simulation(p, rc.solver, monitor.hook());
  const auto v = monitor.verdict();
  write_trajectory(out, traj, c.svg);
  json j = {{"verdict", verdict_json(v)},
            {"termination", to_string(traj.termination)},
            {"t_final", traj.records.back().t},
            {"h_final", traj.records.back().h},
            {"solver", solver_json(rc.solver)},
            {"config", echo(rc)}};
  out.json_file("verdict.json", j);
  std::cout << to_string(v.kind) << "  (" << v.note << ")\n";
  if (traj.termination == Termination::StabilityFailure || traj.termination == Termination::Interrupted) {
    std::cerr << traj.message << "\n";
    return finish(out, kNumerical);
  }
  return finish(out, kOk);
}

// --- threshold ----------------------------------------------------------------

struct ThresholdArgs {
  std::string param = "mu";
  std::vector<double> bracket;
} threshold_args;

int run_threshold(const Common& c) {
  const auto rc = load(c);
  const auto& a = threshold_args;
  if (a.bracket.size() != 2) fail(ErrorKind::InvalidArgument, "--bracket takes two values");
  const json flags = {{"param", a.param}, {"bracket", a.bracket}};
  io::OutputSet out(prefix_for(c, "threshold"), "threshold", inputs_hash(&rc, flags));
  json j = {{"param", a.param}, {"bracket", a.bracket}, {"solver", solver_json(rc.solver)},
            {"rel_width", rc.threshold.rel_width}, {"config", echo(rc)}};
  int code = kOk;
  try {
    const auto th = a.param == "mu" ? find_mu_star(rc.params, rc.solver, a.bracket[0], a.bracket[1], rc.threshold)
                                    : find_eps_star(rc.params, rc.solver, a.bracket[0], a.bracket[1], rc.threshold);
    json evals = json::array();
    for (const auto& e : th.evaluations) evals.push_back({{"value", e.value}, {"verdict", to_string(e.verdict)}, {"t_end", e.t_end}});
    j["interval"] = {th.lower, th.upper};
    j["width"] = th.upper - th.lower;
    j["degenerate_zero"] = th.degenerate_zero;
    j["widened"] = th.widened;
    j["h_star"] = jnum(th.h_star);
    j["h_star_inflated"] = jnum(th.h_star_inflated);
    j["evaluations"] = evals;
    std::cout << a.param << "* in [" << th.lower << ", " << th.upper << "]"
              << (th.degenerate_zero ? "  (h0 past the inflated critical radius: threshold 0)" : "") << "\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoBracket) throw;
    j["error"] = e.what();
    std::cerr << e.what() << "\n";
    code = kNumerical;
  }
  out.json_file("threshold.json", j);
  return finish(out, code);
}

// --- speed --------------------------------------------------------------------

struct SpeedArgs {
  double window = 20.0;
} speed_args;

json semiwave_json(const SemiWaveResult& r) {
  return {{"mean_K0", r.mean_K0},     {"K0_min", r.K0.min()},
          {"K0_max", r.K0.max()},     {"upper_bound", r.upper_bound},
          {"boundary_residual", r.boundary_residual}, {"tail_gap", r.tail_gap},
          {"L", r.L},                 {"iterations", r.iterations}};
}

int run_speed(const Common& c) {
  const auto rc = load(c);
  const auto& p = rc.params;
  io::OutputSet out(prefix_for(c, "speed"), "speed", inputs_hash(&rc, {{"window", speed_args.window}}));
  const auto bounds = speed_bounds(p, rc.semiwave);
  auto cfg = rc.solver;
  cfg.snapshot_every = 0;
  const auto traj = run_simulation(p, cfg);
  write_trajectory(out, traj, c.svg);
  json j = {{"lower_bound", bounds.lower},
            {"upper_bound", bounds.upper},
            {"lower_flagged", bounds.lower_flagged},
            {"note", bounds.note},
            {"upper_wave", semiwave_json(bounds.upper_wave)},
            {"termination", to_string(traj.termination)},
            {"window", speed_args.window},
            {"solver", solver_json(cfg)},
            {"config", echo(rc)}};
  if (!bounds.lower_flagged) j["lower_wave"] = semiwave_json(bounds.lower_wave);
  int code = termination_code(traj.termination);
  try {
    const auto fit = measure_speed(traj, speed_args.window);
    j["measured"] = fit.slope;
    j["fit_residual"] = fit.residual;
    j["fit_samples"] = fit.samples;
    j["within_bounds"] = fit.slope >= 0.95 * bounds.lower && fit.slope <= 1.05 * bounds.upper;
    std::cout << "measured " << fit.slope << " in [" << bounds.lower << ", " << bounds.upper << "]\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    j["error"] = e.what();
    std::cerr << e.what() << "\n";
    code = kNumerical;
  }
  out.json_file("speed.json", j);
  return finish(out, code);
}

// --- semiwave -----------------------------------------------------------------

struct SemiArgs {
  double mu = 1.0, d = 1.0, T = 1.0, L = 0.0, dr = 0.02;
  std::string a = "const:1", b = "const:1";
} semi_args;

int run_semiwave(const Common& c) {
  const auto& a = semi_args;
  const json flags = {{"mu", a.mu}, {"d", a.d}, {"T", a.T}, {"L", a.L}, {"dr", a.dr}, {"a", a.a}, {"b", a.b}};
  io::OutputSet out(prefix_for(c, "semiwave"), "semiwave", inputs_hash(nullptr, flags));
  SemiWaveOptions opts;
  opts.L = a.L;
  opts.dr = a.dr;
  const auto r = semiwave_k0(a.mu, io::parse_time_function(a.a, a.T), io::parse_time_function(a.b, a.T), a.d, opts);
  json j = semiwave_json(r);
  j["inputs"] = flags;
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < r.U.time_samples(); ++k) rows.push_back({r.U.time(k), r.K0(r.U.time(k))});
  out.csv_file("K0.csv", {"t", "K0"}, rows);
  rows.clear();
  const int stride = std::max(1, r.U.intervals() / 400);
  for (int i = 0; i <= r.U.intervals(); i += stride) rows.push_back({r.U.radius(i), r.U.at(0, i)});
  out.csv_file("profile.csv", {"r", "U"}, rows);
  print(j);
  out.json_file("semiwave.json", j);
  return finish(out, kOk);
}

// --- sweep --------------------------------------------------------------------

struct SweepArgs {
  std::string p1 = "mu", p2;
  std::vector<double> v1, v2;
} sweep_args;

Dial dial_for(const std::string& name) {
  if (name == "mu") return mu_dial();
  if (name == "h0") return h0_dial();
  if (name == "d1") return d1_dial();
  if (name == "eps") return eps_dial();
  fail(ErrorKind::InvalidArgument, "sweep parameters are d1, h0, mu, eps");
}

int run_sweep(const Common& c) {
  const auto rc = load(c);
  const auto& a = sweep_args;
  if (a.v1.empty()) fail(ErrorKind::InvalidArgument, "--values1 is required");
  if (a.p2.empty() != a.v2.empty()) fail(ErrorKind::InvalidArgument, "--param2 and --values2 go together");
  const auto d1 = dial_for(a.p1);
  const auto d2 = a.p2.empty() ? Dial() : dial_for(a.p2);
  const std::vector<double> v2 = a.v2.empty() ? std::vector<double>{NAN} : a.v2;
  const json flags = {{"param1", a.p1}, {"values1", a.v1}, {"param2", a.p2}, {"values2", a.v2}};
  io::OutputSet out(prefix_for(c, "sweep"), "sweep", inputs_hash(&rc, flags));

  struct Point {
    ModelParams params;
    double x, y;
  };
  std::vector<Point> points;
  for (double y : v2) {
    for (double x : a.v1) {
      auto p = d1(rc.params, x);
      if (d2) p = d2(p, y);
      points.push_back({p, x, y});
    }
  }
  // h* depends on d1 only through the diffusivity; cache per distinct d1
  std::map<double, double> h_star;
  for (const auto& pt : points) {
    if (!h_star.count(pt.params.d1)) h_star[pt.params.d1] = resident_h_star(rc, pt.params);
  }
  struct Cell {
    std::string verdict;
    double h_final = NAN;
  };
  const auto cells = parallel_map(points.size(), [&](std::size_t i) -> Cell {
    if (interrupt_flag().load()) return {"Interrupted"};
    try {
      const auto r = run_and_classify(points[i].params, rc.solver, h_star.at(points[i].params.d1), rc.classify,
                                      rc.threshold.max_doublings);
      return {to_string(r.verdict.kind), r.h_final};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Interrupted) return {"Interrupted"};
      return {std::string("Failed:") + to_string(e.kind())};
    }
  });

  std::vector<std::vector<std::string>> rows;
  bool interrupted = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    interrupted = interrupted || cells[i].verdict == "Interrupted";
    rows.push_back({io::format_number(points[i].x), a.p2.empty() ? "" : io::format_number(points[i].y),
                    cells[i].verdict, io::format_number(cells[i].h_final)});
  }
  out.text_csv_file("verdicts.csv", {a.p1, a.p2.empty() ? "param2" : a.p2, "verdict", "h_final"}, rows);
  if (c.svg) {
    std::vector<std::vector<char>> grid(v2.size(), std::vector<char>(a.v1.size()));
    for (std::size_t i = 0; i < points.size(); ++i) grid[i / a.v1.size()][i % a.v1.size()] = cells[i].verdict[0];
    out.text_file("verdicts.svg", io::svg_verdict_map(a.v1, a.v2.empty() ? std::vector<double>{0.0} : a.v2, grid,
                                                      a.p1, a.p2.empty() ? "" : a.p2));
  }
  json hs = json::object();
  for (const auto& [d, h] : h_star) hs[io::format_number(d)] = jnum(h);
  out.json_file("sweep.json", {{"points", points.size()}, {"interrupted", interrupted}, {"h_star_by_d1", hs},
                               {"solver", solver_json(rc.solver)}, {"config", echo(rc)}});
  std::cout << points.size() << " points" << (interrupted ? " (interrupted; partial results written)" : "") << "\n";
  return finish(out, interrupted ? kNumerical : kOk);
}

// --- registration -------------------------------------------------------------

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "config file or preset name");
  if (config_required) opt->required();
  sub->add_option("--set", c.sets, "override, section.key=value (repeatable)");
  sub->add_option("--out", c.out, "output prefix (default: the subcommand name)");
  sub->add_option("--t-end", c.t_end, "override solver.t_end");
  sub->add_flag("--svg", c.svg, "also write SVG plots");
}

}  // namespace

void register_commands(CLI::App& app, Common& c, std::vector<Command>& commands) {
  std::string presets;
  for (const auto& n : io::preset_names()) presets += (presets.empty() ? "" : ", ") + n;
  app.footer("presets: " + presets + "\nexit codes: 0 ok, 1 usage, 2 numerical failure, 3 domain exhausted");

  auto* check = app.add_subcommand("check", "hypothesis report for a configuration");
  add_common(check, c, true);
  commands.push_back({check, run_check});

  auto* eigen = app.add_subcommand("eigen", "principal periodic-parabolic eigenvalue on a ball");
  add_common(eigen, c, false);
  eigen->add_option("--d", eigen_args.d, "diffusivity");
  eigen->add_option("--R", eigen_args.R, "ball radius");
  eigen->add_option("--T", eigen_args.T, "period");
  eigen->add_option("--N", eigen_args.N, "dimension");
  eigen->add_option("--grid", eigen_args.grid, "radial intervals");
  eigen->add_option("--steps", eigen_args.steps, "time steps per period");
  eigen->add_option("--m", eigen_args.m, "coefficient: const:v, sin:c0,c1[,phase], dip:base,amp,center,width");
  eigen->add_option("--coef", eigen_args.coef, "coefficient name from --config (m1, m2, ...)");
  eigen->add_flag("--snapshot", eigen_args.snapshot, "write the eigenfunction at t = 0");
  eigen->add_flag("--critical", eigen_args.critical, "also find the critical radius");
  commands.push_back({eigen, run_eigen});

  auto* ode = app.add_subcommand("periodic-ode", "periodic logistic solution V' = V(a - bV)");
  add_common(ode, c, false);
  ode->add_option("--a", ode_args.a, "growth a(t)");
  ode->add_option("--b", ode_args.b, "density b(t)");
  ode->add_option("--T", ode_args.T, "period");
  ode->add_option("--nodes", ode_args.nodes, "time nodes");
  commands.push_back({ode, run_periodic_ode});

  auto* entire = app.add_subcommand("entire", "periodic steady state of the resident on a truncated ball");
  add_common(entire, c, true);
  entire->add_option("--r-out", entire_args.r_out, "truncation radius");
  entire->add_option("--grid", entire_args.grid, "radial intervals");
  commands.push_back({entire, run_entire});

  auto* sim = app.add_subcommand("simulate", "run the free boundary problem");
  add_common(sim, c, true);
  sim->add_flag("--force", sim_args.force, "run even when (H1) fails");
  sim->add_flag("--scalar", sim_args.scalar, "drop the resident (single species)");
  commands.push_back({sim, run_simulate});

  auto* cls = app.add_subcommand("classify", "spreading or vanishing verdict");
  add_common(cls, c, true);
  commands.push_back({cls, run_classify});

  auto* th = app.add_subcommand("threshold", "bisect the sharp threshold in mu or eps");
  add_common(th, c, true);
  th->add_option("--param", threshold_args.param, "mu or eps")->check(CLI::IsMember({"mu", "eps"}));
  th->add_option("--bracket", threshold_args.bracket, "low high")->expected(2)->required();
  commands.push_back({th, run_threshold});

  auto* sp = app.add_subcommand("speed", "measured front speed against the semi-wave bounds");
  add_common(sp, c, true);
  sp->add_option("--window", speed_args.window, "fit window in periods");
  commands.push_back({sp, run_speed});

  auto* sw = app.add_subcommand("semiwave", "semi-wave speed K0 for periodic a, b");
  add_common(sw, c, false);
  sw->add_option("--mu", semi_args.mu, "expansion coefficient");
  sw->add_option("--d", semi_args.d, "diffusivity");
  sw->add_option("--T", semi_args.T, "period");
  sw->add_option("--a", semi_args.a, "growth a(t)");
  sw->add_option("--b", semi_args.b, "density b(t)");
  sw->add_option("--L", semi_args.L, "truncation (default 40 sqrt(d / mean a))");
  sw->add_option("--dr", semi_args.dr, "grid spacing");
  commands.push_back({sw, run_semiwave});

  auto* swp = app.add_subcommand("sweep", "verdict map over one or two parameters");
  add_common(swp, c, true);
  swp->add_option("--param1", sweep_args.p1, "d1, h0, mu or eps")->check(CLI::IsMember({"d1", "h0", "mu", "eps"}));
  swp->add_option("--values1", sweep_args.v1, "values of the first parameter")->required();
  swp->add_option("--param2", sweep_args.p2, "second parameter")->check(CLI::IsMember({"d1", "h0", "mu", "eps"}));
  swp->add_option("--values2", sweep_args.v2, "values of the second parameter");
  commands.push_back({swp, run_sweep});
}

}  // namespace stefan::cli
