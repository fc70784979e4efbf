#pragma once

// System parameters, drive waveforms and simulation grids.
//
// Natural units throughout: hbar = k_B = 1. Frequencies are in units of the
// undriven resonator frequency omega_bar (which is normally 1), times in
// units of 1/omega_bar, temperatures as k_B T / (hbar omega_bar).

#include <string>
#include <vector>

namespace qres {

struct SystemParams {
  double omega_bar = 1.0;  // undriven resonator frequency
  double gamma = 0.1;      // reservoir coupling rate
  double T_e = 1.5;        // reservoir temperature

  /// hbar omega_bar / k_B T_e
  double x() const { return omega_bar / T_e; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Throws Error{domain} unless omega_bar > 0, gamma >= 0, T_e > 0.
void validate(const SystemParams& params);

/// Non-fatal advisories (weak-coupling violation). Empty when none apply.
std::vector<std::string> advisories(const SystemParams& params);

/// Bose-Einstein occupation 1/(e^{omega/T} - 1).
double bose_einstein(double omega, double T);

/// d n_B / d omega at fixed T. Always negative.
double bose_einstein_derivative(double omega, double T);

enum class DriveKind { constant, square, sawtooth, harmonic, tabulated };

std::string to_string(DriveKind kind);
DriveKind drive_kind_from_string(const std::string& name);

struct Knot {
  double t = 0.0;
  double omega = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Time-dependent resonator frequency omega_0(t) = omega_bar + amplitude * f(t).
///
/// Periodic kinds use the cycle phase u = (t + phase * period / 2pi) / period:
///   square:   f = +1 on u mod 1 in [0, 1/2), -1 on [1/2, 1)
///   sawtooth: f = -1 + 2 (u mod 1), reset at integer u
///   harmonic: f = sin(2 pi u)
/// Jumps are right-continuous: the value at a jump time is the value after it.
/// Tabulated drives interpolate linearly between knots and ignore omega_bar
/// and amplitude.
class DriveWaveform {
 public:
  DriveWaveform() = default;

  static DriveWaveform constant(double omega_bar);
  static DriveWaveform square(double omega_bar, double amplitude, double period,
                              double phase = 0.0);
  static DriveWaveform sawtooth(double omega_bar, double amplitude, double period,
                                double phase = 0.0);
  static DriveWaveform harmonic(double omega_bar, double amplitude, double period,
                                double phase = 0.0);
  static DriveWaveform tabulated(std::vector<Knot> knots);

  DriveKind kind() const { return kind_; }
  double omega_bar() const { return omega_bar_; }
  double amplitude() const { return amplitude_; }
  double period() const { return period_; }
  double phase() const { return phase_; }
  const std::vector<Knot>& knots() const { return knots_; }

  bool is_periodic() const;
  /// 2 pi / period; zero for non-periodic drives.
  double angular_frequency() const;

  /// omega_0(t), right-continuous at jumps.
  double operator()(double t) const;
  /// d omega_0 / dt, right-continuous at jumps and knots.
  double rate(double t) const;

  /// Value of the smooth piece that contains `t_ref`, evaluated at `t`.
  /// Integrators use this with t_ref inside the current segment so that
  /// stage evaluations at segment ends never see the neighbouring piece.
  double on_piece(double t, double t_ref) const;
  double rate_on_piece(double t, double t_ref) const;

  /// Value jumps of omega_0 in [t0, t1), sorted. Empty for smooth drives.
  std::vector<double> discontinuities(double t0, double t1) const;

  /// Jumps plus slope kinks (tabulated knots) strictly inside (t0, t1).
  std::vector<double> breakpoints(double t0, double t1) const;

  /// Throws Error{domain} unless omega_0(t) > 0 everywhere it is defined.
  void validate() const;

  friend bool operator==(const DriveWaveform&, const DriveWaveform&) = default;

 private:
  double cycle(double t) const;  // u(t)

  DriveKind kind_ = DriveKind::constant;
  double omega_bar_ = 1.0;
  double amplitude_ = 0.0;
  double period_ = 0.0;
  double phase_ = 0.0;
  std::vector<Knot> knots_;
};

struct SimulationGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double dt_max = 1.0;      // largest integrator step
  int n_samples = 2;        // output samples on [t_start, t_end], inclusive
  int relax_periods = 0;    // pre-run length in drive periods; 0 selects the default

  std::vector<double> sample_times() const;

  friend bool operator==(const SimulationGrid&, const SimulationGrid&) = default;
};

void validate(const SimulationGrid& grid);

/// `n` evenly spaced points covering [t0, t1] inclusive.
std::vector<double> linspace(double t0, double t1, int n);

}  // namespace qres
