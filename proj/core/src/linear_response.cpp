#include "qres/linear_response.hpp"

#include <cmath>
#include <string>

#include "qres/errors.hpp"

namespace qres {

namespace {

constexpr complex kI{0.0, 1.0};

void require_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::domain, "x = omega_bar/T_e must be positive");
}

}  // namespace

complex temperature_response(double Omega, const SystemParams& params) {
  validate(params);
  return kI * Omega / (params.gamma + kI * Omega) * (params.T_e / params.omega_bar);
}

complex power_response(double Omega, const SystemParams& params) {
  validate(params);
  return kI * Omega * bose_einstein(params.omega_bar, params.T_e);
}

complex heat_response(double Omega, const SystemParams& params) {
  validate(params);
  const double dn = bose_einstein_derivative(params.omega_bar, params.T_e);
  return params.omega_bar * (kI * params.gamma * Omega) / (params.gamma + kI * Omega) * dn;
}

ResponseValue response(ResponseKind kind, double Omega, const SystemParams& params) {
  switch (kind) {
    case ResponseKind::temperature: return {Omega, temperature_response(Omega, params)};
    case ResponseKind::power: return {Omega, power_response(Omega, params)};
    case ResponseKind::heat: return {Omega, heat_response(Omega, params)};
  }
  return {Omega, {}};
}

double equilibrium_occupation_s(double s, double x) {
  const double denom = std::expm1(x + s);
  if (denom == 0.0) throw Error(ErrorKind::domain, "equilibrium_occupation_s: pole at x + s = 0");
  return 1.0 / denom;
}

complex equilibrium_occupation_s(complex s, double x) {
  const complex z = x + s;
  // expm1 for complex z: e^a (cos b + i sin b) - 1 with the real part kept accurate
  const double a = z.real();
  const double b = z.imag();
  const double half = std::sin(0.5 * b);
  const complex denom{std::expm1(a) * std::cos(b) - 2.0 * half * half, std::exp(a) * std::sin(b)};
  if (denom == complex{0.0, 0.0}) {
    throw Error(ErrorKind::domain, "equilibrium_occupation_s: pole at e^{x+s} = 1");
  }
  return 1.0 / denom;
}

Series equilibrium_occupation_series(double x, int order) {
  require_x(x);
  // e^{x+s} - 1 = e^x (e^s - 1) + (e^x - 1)
  Series denom = Series::exp_minus_one(order, +1) * std::exp(x);
  denom += std::expm1(x);
  return reciprocal(denom);
}

double equilibrium_cgf(double s, double x) {
  require_x(x);
  if (!(std::abs(s) < x)) {
    throw Error(ErrorKind::window, "equilibrium_cgf: |s| must be below x (no stationary distribution)");
  }
  const double e0 = std::expm1(x);
  return std::log(e0 / std::expm1(x + s)) + std::log(e0 / std::expm1(x - s));
}

std::vector<double> equilibrium_cumulants(double x, int max_order) {
  require_x(x);
  if (max_order < 1) throw Error(ErrorKind::domain, "equilibrium_cumulants: order must be >= 1");
  if (max_order > Series::kMaxOrder) {
    throw Error(ErrorKind::order_overflow, "equilibrium_cumulants: order above " +
                                               std::to_string(Series::kMaxOrder));
  }
  const double n = 1.0 / std::expm1(x);
  std::vector<double> out(static_cast<std::size_t>(max_order), 0.0);
  if (max_order >= 2) out[1] = 2.0 * n * (1.0 + n);
  if (max_order >= 4) out[3] = out[1] * (1.0 + 6.0 * n + 6.0 * n * n);
  if (max_order > 4) {
    const Series ratio = equilibrium_occupation_series(x, max_order) * (1.0 / n);
    const Series half = log(ratio);
    const Series cgf = half + half.reflected();
    for (int k = 6; k <= max_order; k += 2) out[static_cast<std::size_t>(k - 1)] = cgf.derivative(k);
  }
  return out;
}

EquilibriumStats equilibrium_stats(double x, int max_order) {
  return {x, equilibrium_cumulants(x, max_order)};
}

double cumulant_bracket(int k, double x) {
  if (k < 1) throw Error(ErrorKind::domain, "cumulant order must be >= 1");
  const Series n = equilibrium_occupation_series(x, k);
  double sum = 0.0;
  for (int l = 0; l < k; ++l) sum += binomial(k, l) * n.derivative(l);
  return sum / n[0];
}

complex cumulant_response(int k, double Omega, const SystemParams& params) {
  validate(params);
  const double n = bose_einstein(params.omega_bar, params.T_e);
  const complex first = params.gamma / (params.gamma + kI * Omega) * (1.0 + n) * n / params.T_e;
  return cumulant_bracket(k, params.x()) * first;
}

}  // namespace qres
