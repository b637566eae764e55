#include "stefan/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stefan/error.hpp"

namespace stefan {

double RadialProfile::operator()(double x) const {
  struct Eval {
    double x;
    double operator()(const Cosine& c) const {
      return x >= 1.0 ? 0.0 : c.amplitude * std::cos(0.5 * std::numbers::pi * x);
    }
    double operator()(const Parabola& p) const { return x >= 1.0 ? 0.0 : p.amplitude * (1.0 - x * x); }
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Gaussian& g) const {
      const double y = x / g.width;
      return g.base + g.amplitude * std::exp(-y * y);
    }
    double operator()(const Samples& s) const {
      const auto n = s.values.size() - 1;
      const double y = std::clamp(x, 0.0, s.extent) / s.extent * static_cast<double>(n);
      const auto k = std::min(static_cast<std::size_t>(y), n - 1);
      const double w = y - static_cast<double>(k);
      return s.values[k] + w * (s.values[k + 1] - s.values[k]);
    }
  };
  return std::visit(Eval{x}, shape);
}

RadialProfile RadialProfile::scaled(double factor) const {
  struct Scale {
    double f;
    RadialProfile operator()(Cosine c) const { return {Cosine{c.amplitude * f}}; }
    RadialProfile operator()(Parabola p) const { return {Parabola{p.amplitude * f}}; }
    RadialProfile operator()(Constant c) const { return {Constant{c.value * f}}; }
    RadialProfile operator()(Gaussian g) const {
      return {Gaussian{g.base * f, g.amplitude * f, g.width}};
    }
    RadialProfile operator()(Samples s) const {
      for (double& v : s.values) v *= f;
      return {std::move(s)};
    }
  };
  return std::visit(Scale{factor}, shape);
}

std::vector<double> InitialData::u_samples(int n) const {
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = u0(static_cast<double>(i) / n);
  out.back() = 0.0;
  return out;
}

namespace {
constexpr int kProfileProbe = 4096;
}

double InitialData::u_sup() const {
  double s = 0.0;
  for (double v : u_samples(kProfileProbe)) s = std::max(s, std::abs(v));
  return s;
}

double InitialData::u_c1_norm() const {
  const auto u = u_samples(kProfileProbe);
  const double dr = h0 / kProfileProbe;
  double slope = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) slope = std::max(slope, std::abs(u[i + 1] - u[i]) / dr);
  return u_sup() + slope;
}

double InitialData::v_sup(double r_max) const {
  double s = 0.0;
  for (int i = 0; i <= kProfileProbe; ++i) s = std::max(s, std::abs(v(r_max * i / kProfileProbe)));
  if (const auto* smp = std::get_if<RadialProfile::Samples>(&v0.shape)) {
    for (double x : smp->values) s = std::max(s, std::abs(x));
  }
  return s;
}

void InitialData::validate(double r_max) const {
  require(h0 > 0.0, "h0 must be positive");
  const int n = 512;
  const auto u = u_samples(n);
  for (int i = 0; i < n; ++i) {
    if (!(u[static_cast<std::size_t>(i)] > 0.0)) {
      std::ostringstream os;
      os << "u0 must be positive on [0, h0); u0(" << h0 * i / n << ") = " << u[static_cast<std::size_t>(i)];
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
  require(std::abs(u0(1.0)) <= 1e-12 * (1.0 + u_sup()), "u0 must vanish at r = h0");
  const double dr = h0 / n;
  require(std::abs(u0(0.0) - u0(1.0 / n)) / dr < 1e-2 * (1.0 + u_sup() / h0),
          "u0 must satisfy u0'(0) = 0");
  bool nonzero = false;
  for (int i = 0; i <= n; ++i) {
    const double x = v(r_max * i / n);
    require(x >= 0.0 && std::isfinite(x), "v0 must be nonnegative and bounded");
    nonzero = nonzero || x > 0.0;
  }
  require(nonzero, "v0 must not vanish identically");
  const double dv = r_max / (64.0 * n);
  require(std::abs(v(dv) - v(0.0)) / dv < 1e-2 * (1.0 + v_sup(r_max)), "v0 must satisfy v0'(0) = 0");
}

void ModelParams::validate() const {
  require(d1 > 0.0 && d2 > 0.0, "diffusivities must be positive");
  require(mu > 0.0, "mu must be positive");
  require(N >= 1, "dimension must be at least 1");
  require(T > 0.0, "period must be positive");
  for (const auto* f : {&m1, &m2, &b1, &b2, &c1, &c2}) {
    require(std::abs(f->period() - T) <= 1e-12 * T, "coefficient period must equal T");
  }
  require(b1.lower().min() > 0.0 && b2.lower().min() > 0.0, "b1 and b2 must be strictly positive");
  require(c1.lower().min() >= 0.0 && c2.lower().min() >= 0.0, "c1 and c2 must be nonnegative");
}

namespace {

struct NamedField {
  const char* name;
  const CoefficientField* field;
};

void check_positive(const NamedField& f, const SamplingGrid& grid, HypothesisReport& report) {
  ClauseResult clause{std::string(f.name) + " positive", true, std::nullopt, ""};
  const double T = f.field->period();
  auto probe = [&](double t, double r) {
    const double v = (*f.field)(t, r);
    if (!(v > 0.0) && clause.pass) {
      clause.pass = false;
      clause.witness = Witness{t, r, v};
    }
  };
  for (int k = 0; k < grid.time_samples && clause.pass; ++k) {
    for (int i = 0; i <= grid.space_samples && clause.pass; ++i) {
      probe(T * k / grid.time_samples, grid.r_max * i / grid.space_samples);
    }
  }
  if (const auto* tab = std::get_if<CoefficientField::Tabulated>(&f.field->profile())) {
    const auto& g = tab->grid;
    for (int k = 0; k < g.time_samples() && clause.pass; ++k) {
      for (int i = 0; i <= g.intervals() && clause.pass; ++i) probe(g.time(k), g.radius(i));
    }
  }
  if (clause.pass && !(f.field->lower().min() > 0.0)) {
    clause.pass = false;
    clause.detail = "declared lower envelope is not positive";
  }
  report.add(std::move(clause));
}

void check_enveloped(const NamedField& f, const SamplingGrid& grid, HypothesisReport& report) {
  ClauseResult clause{std::string(f.name) + " enveloped", true, std::nullopt, ""};
  const double T = f.field->period();
  const double slack = 1e-12 * (1.0 + f.field->sup_abs());
  for (int k = 0; k < grid.time_samples && clause.pass; ++k) {
    const double t = T * k / grid.time_samples;
    const double lo = f.field->lower()(t);
    const double hi = f.field->upper()(t);
    for (int i = 0; i <= grid.space_samples && clause.pass; ++i) {
      const double r = grid.r_max * i / grid.space_samples;
      const double v = (*f.field)(t, r);
      if (v < lo - slack || v > hi + slack) {
        clause.pass = false;
        clause.witness = Witness{t, r, v};
      }
    }
  }
  report.add(std::move(clause));
}

void check_periodic(const NamedField& f, const SamplingGrid& grid, HypothesisReport& report) {
  constexpr int kProbe = 64;
  ClauseResult clause{std::string(f.name) + " periodic", true, std::nullopt, ""};
  const double T = f.field->period();
  for (int k = 0; k < kProbe && clause.pass; ++k) {
    const double t = T * k / kProbe;
    for (int i = 0; i < kProbe && clause.pass; ++i) {
      const double r = grid.r_max * i / (kProbe - 1);
      const double a = (*f.field)(t, r);
      const double b = (*f.field)(t + T, r);
      if (!std::isfinite(a) || std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        clause.pass = false;
        clause.witness = Witness{t, r, a};
      }
    }
  }
  report.add(std::move(clause));
}

}  // namespace

HypothesisReport check_H1(const ModelParams& params, const SamplingGrid& grid) {
  HypothesisReport report;
  const NamedField positive[] = {{"b1", &params.b1}, {"b2", &params.b2}, {"c1", &params.c1}, {"c2", &params.c2}};
  for (const auto& f : positive) {
    check_positive(f, grid, report);
    check_enveloped(f, grid, report);
  }
  const NamedField all[] = {{"m1", &params.m1}, {"m2", &params.m2}, {"b1", &params.b1},
                            {"b2", &params.b2}, {"c1", &params.c1}, {"c2", &params.c2}};
  for (const auto& f : all) check_periodic(f, grid, report);
  return report;
}

std::vector<double> default_probe_radii(double h0) {
  return {10.0 * h0, 20.0 * h0, 40.0 * h0, 80.0 * h0};
}

H2Result check_H2(const CoefficientField& field, const std::vector<double>& probe_radii,
                  double threshold, int time_samples) {
  require(probe_radii.size() >= 3, "check_H2 needs at least three probe radii");
  require(std::is_sorted(probe_radii.begin(), probe_radii.end()) &&
              std::adjacent_find(probe_radii.begin(), probe_radii.end()) == probe_radii.end(),
          "probe radii must be strictly increasing");
  H2Result out;
  const double T = field.period();
  for (double r : probe_radii) {
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < time_samples; ++k) {
      const double v = field(T * k / time_samples, r);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.liminf_by_probe.push_back(lo);
    out.limsup_by_probe.push_back(hi);
  }
  const auto n = probe_radii.size();
  auto stable = [](const std::vector<double>& est, std::size_t from) {
    for (std::size_t i = from; i + 1 < est.size(); ++i) {
      const double scale = std::max(std::abs(est[i]), std::abs(est[i + 1]));
      if (std::abs(est[i] - est[i + 1]) > 0.01 * scale) return false;
    }
    return true;
  };
  if (!stable(out.liminf_by_probe, n - 3) || !stable(out.limsup_by_probe, n - 3)) {
    std::ostringstream os;
    os << "estimates at the last three probes differ by more than 1% (liminf "
       << out.liminf_by_probe[n - 3] << ", " << out.liminf_by_probe[n - 2] << ", "
       << out.liminf_by_probe[n - 1] << ")";
    fail(ErrorKind::NonStabilized, os.str());
  }
  out.liminf = out.liminf_by_probe.back();
  out.limsup = out.limsup_by_probe.back();
  out.pass = out.liminf >= threshold && std::isfinite(out.limsup);
  return out;
}

const char* to_string(Environment env) {
  switch (env) {
    case Environment::Strong: return "Strong";
    case Environment::Weak: return "Weak";
    case Environment::Neither: return "Neither";
  }
  return "Neither";
}

namespace {

bool changes_sign(const CoefficientField& f, double t, double r_lo, double r_hi, int n) {
  bool pos = false, neg = false;
  for (int i = 1; i < n; ++i) {
    const double v = f(t, r_lo + (r_hi - r_lo) * i / n);
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  return pos && neg;
}

}  // namespace

Environment classify_environment(const ModelParams& params, const SamplingGrid& grid) {
  const double T = params.T;
  bool strong = true;
  bool weak = true;
  for (int k = 0; k < grid.time_samples; ++k) {
    const double t = T * k / grid.time_samples;
    strong = strong && changes_sign(params.m1, t, 0.0, params.h0(), grid.space_samples) &&
             changes_sign(params.m2, t, 0.0, grid.r_max, grid.space_samples);
    for (int i = 0; i <= grid.space_samples && weak; ++i) {
      const double r = grid.r_max * i / grid.space_samples;
      const double a = params.m1(t, r), b = params.m2(t, r);
      weak = a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b);
    }
  }
  if (strong) return Environment::Strong;
  if (weak) return Environment::Weak;
  return Environment::Neither;
}

}  // namespace stefan
