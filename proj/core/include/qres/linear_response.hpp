#pragma once

// Closed-form linear response to a small frequency modulation
// omega_0(t) = omega_bar + d_omega(t), and the undriven long-time counting
// statistics those responses are built on.
//
// A response R(Omega) maps the Fourier amplitude of d_omega to that of the
// observable. For a harmonic drive d_omega sin(Omega t) the steady-state
// modulation is |R| d_omega sin(Omega t + arg R).

#include <complex>
#include <vector>

#include "qres/model.hpp"
#include "qres/series.hpp"

namespace qres {

using complex = std::complex<double>;

struct ResponseValue {
  double Omega = 0.0;
  complex value;

  double amplitude() const { return std::abs(value); }
  double argument() const { return std::arg(value); }
  /// Time by which the output leads the drive.
  double time_shift() const { return Omega != 0.0 ? argument() / Omega : 0.0; }
};

enum class ResponseKind { temperature, power, heat };

/// i Omega / (gamma + i Omega) * T_e / omega_bar
complex temperature_response(double Omega, const SystemParams& params);
/// i Omega n_B(omega_bar)
complex power_response(double Omega, const SystemParams& params);
/// omega_bar i gamma Omega / (gamma + i Omega) n_B'(omega_bar)
complex heat_response(double Omega, const SystemParams& params);

ResponseValue response(ResponseKind kind, double Omega, const SystemParams& params);

/// n(s) = 1/(e^{x+s} - 1): the stationary s-dependent occupation of the
/// undriven resonator. Throws Error{domain} at the pole x + s = 0.
double equilibrium_occupation_s(double s, double x);
complex equilibrium_occupation_s(complex s, double x);

/// Taylor series of equilibrium_occupation_s around s = 0.
Series equilibrium_occupation_series(double x, int order);

/// C(s) = ln(n(s)/n(0)) + ln(n(-s)/n(0)); defined for |s| < x only
/// (Error{window} otherwise).
double equilibrium_cgf(double s, double x);

struct EquilibriumStats {
  double x = 0.0;
  std::vector<double> cumulants;  // cumulants[k - 1] is the k-th cumulant

  double cgf(double s) const { return equilibrium_cgf(s, x); }
  double occupation(double s) const { return equilibrium_occupation_s(s, x); }
};

/// First `max_order` cumulants of the undriven long-time transfer statistics.
/// Odd orders are exactly zero.
std::vector<double> equilibrium_cumulants(double x, int max_order);
EquilibriumStats equilibrium_stats(double x, int max_order);

/// sum_{l=0}^{k-1} C(k, l) n^(l)(0) / n(0), with derivatives from series
/// arithmetic. Equal to 1 for k = 1.
double cumulant_bracket(int k, double x);

/// Linear response of the k-th cumulant per unit frequency modulation:
/// bracket_k * gamma/(gamma + i Omega) (1 + n) n / T_e.
complex cumulant_response(int k, double Omega, const SystemParams& params);

}  // namespace qres
