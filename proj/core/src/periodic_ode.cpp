#include "stefan/periodic_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "stefan/error.hpp"

namespace stefan {

namespace {

// F[j] = int_0^{t_j} f on uniform nodes: Simpson over pairs, with the
// three-point formula h/12 (5 f0 + 8 f1 - f2) for the odd nodes.
std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (j % 2 == 0) {
      out[j] = out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    } else {
      out[j] = out[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    }
  }
  return out;
}

PeriodicLogisticSolution closed_form(const PeriodicScalarFunction& a, const PeriodicScalarFunction& b,
                                     int n) {
  const double T = a.period();
  const double h = T / n;
  std::vector<double> av(static_cast<std::size_t>(n + 1)), bv(av.size());
  for (int j = 0; j <= n; ++j) {
    av[static_cast<std::size_t>(j)] = a(h * j);
    bv[static_cast<std::size_t>(j)] = b(h * j);
  }
  const auto A = cumulative_integral(av, h);
  std::vector<double> weight(av.size());
  for (std::size_t j = 0; j < av.size(); ++j) weight[j] = bv[j] * std::exp(A[j]);
  const auto I = cumulative_integral(weight, h);
  const double growth = std::expm1(A.back());
  const double C = I.back() / growth;

  std::vector<double> V(static_cast<std::size_t>(n + 1));
  for (std::size_t j = 0; j < V.size(); ++j) V[j] = std::exp(A[j]) / (C + I[j]);

  PeriodicLogisticSolution out;
  out.nodes = n;
  out.mean_a = a.mean();
  out.periodicity_defect = std::abs(V.front() - V.back());
  double residual = 0.0;
  auto at = [&](int j) { return V[static_cast<std::size_t>(((j % n) + n) % n)]; };
  for (int j = 0; j < n; ++j) {
    const double dv = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
    const double x = at(j);
    residual = std::max(residual, std::abs(dv - x * (av[static_cast<std::size_t>(j)] -
                                                     bv[static_cast<std::size_t>(j)] * x)));
  }
  out.residual = residual;
  V.pop_back();
  out.V = PeriodicScalarFunction::tabulated(T, std::move(V));
  return out;
}

}  // namespace

PeriodicLogisticSolution solve_periodic_logistic(const PeriodicScalarFunction& a,
                                                 const PeriodicScalarFunction& b, int nodes) {
  require(std::abs(a.period() - b.period()) <= 1e-12 * a.period(), "a and b must share the period");
  require(nodes >= 8 && nodes % 2 == 0, "node count must be even and at least 8");
  require(b.min() > 0.0, "b must be positive");
  if (!(a.mean() > 0.0)) {
    std::ostringstream os;
    os << "mean of a is " << a.mean() << " <= 0";
    fail(ErrorKind::NoPositivePeriodicSolution, os.str());
  }
  if (a.is_constant() && b.is_constant()) {
    // exact fixed point, no quadrature rounding
    PeriodicLogisticSolution sol;
    sol.nodes = nodes;
    sol.mean_a = a.mean();
    sol.V = PeriodicScalarFunction::tabulated(
        a.period(), std::vector<double>(static_cast<std::size_t>(nodes), a(0.0) / b(0.0)));
    return sol;
  }
  constexpr int kMaxNodes = 1 << 16;
  auto sol = closed_form(a, b, nodes);
  while (sol.residual >= 1e-8 && sol.nodes < kMaxNodes) sol = closed_form(a, b, sol.nodes * 2);
  return sol;
}

ResidentEnvelopes resident_envelopes(const ModelParams& params) {
  return {solve_periodic_logistic(params.m2.liminf_or_lower(), params.b2.upper()),
          solve_periodic_logistic(params.m2.limsup_or_upper(), params.b2.lower())};
}

EnvelopeConstants envelope_constants(const ModelParams& params, const RadialPeriodicField& V) {
  EnvelopeConstants out;
  out.min_V = V.min();
  if (!(out.min_V > 0.0)) {
    std::ostringstream os;
    os << "min V = " << out.min_V;
    fail(ErrorKind::DegenerateV, os.str());
  }
  out.min_b2 = params.b2.lower().min();
  out.K = 0.5 * out.min_b2 * out.min_V;

  const auto row0 = V.row(0);
  const auto it = std::min_element(row0.begin(), row0.end());
  out.min_V0 = *it;
  out.truncation_flag = it + 1 == row0.end() && row0.size() > 1 && *(it - 1) > *it;
  out.v0_sup = params.init.v_sup(V.r_out());
  out.H = std::max(0.0, out.v0_sup / out.min_V0 - 1.0);
  return out;
}

double vbar(double t, double r, const RadialPeriodicField& V, const EnvelopeConstants& constants) {
  return (1.0 + constants.H * std::exp(-constants.K * t)) * V(t, r);
}

H3Result check_H3(const ModelParams& params, const PeriodicScalarFunction& V_upper,
                  const EnvelopeConstants& constants, int time_samples) {
  H3Result out;
  out.margin = INFINITY;
  const auto& m_lower = params.m1.liminf_or_lower();
  const auto& c_upper = params.c1.upper();
  for (int k = 0; k < time_samples; ++k) {
    const double t = params.T * k / time_samples;
    const double margin = m_lower(t) - (1.0 + constants.H) * c_upper(t) * V_upper(t);
    if (margin < out.margin) {
      out.margin = margin;
      out.argmin_t = t;
    }
  }
  out.pass = out.margin > 0.0;
  return out;
}

}  // namespace stefan
