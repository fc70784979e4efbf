#pragma once

// Occupation, temperature, energy, power and heat of the driven resonator.
//
// The resonator stays in a thermal state, so its mean occupation n(t) carries
// all the information. It obeys dn/dt = gamma (n_B(omega_0(t)) - n) and is
// continuous across frequency jumps; temperature is always derived from n.

#include <span>
#include <vector>

#include "qres/integrator.hpp"
#include "qres/model.hpp"

namespace qres {

struct JumpSample {
  double t;
  double n;             // occupation at the jump (continuous)
  double omega_before;
  double omega_after;
};

struct OccupancyTrajectory {
  std::vector<double> times;
  std::vector<double> n;
  /// Running integrals from times.front(): smooth work, int n d(omega_0)/dt dt,
  /// and heat, int omega_0 gamma (n_B - n) dt. Impulsive work is not included.
  std::vector<double> smooth_work;
  std::vector<double> heat;
  /// Drive jumps in (times.front(), times.back()].
  std::vector<JumpSample> jumps;
};

/// Integrates the occupation equation on `times` (sorted; times.front() is
/// the initial time). The step never crosses a drive jump or kink.
OccupancyTrajectory occupancy_trajectory(const SystemParams& params, const DriveWaveform& drive,
                                         std::span<const double> times, double n_init,
                                         const StepperOptions& options = {});

/// Same, on the grid's sample times with the grid's dt_max.
OccupancyTrajectory occupancy_trajectory(const SystemParams& params, const DriveWaveform& drive,
                                         const SimulationGrid& grid, double n_init,
                                         StepperOptions options = {});

/// omega / ln(1 + 1/n); the inverse of the Bose-Einstein distribution.
double temperature_from_occupancy(double n, double omega);

/// (omega_t / omega_ref) T_ref: temperature after a heat-free frequency change.
double adiabatic_temperature(double omega_t, double omega_ref, double T_ref);

struct WorkImpulse {
  double t;
  double work;
};

struct ThermoTrajectory {
  std::vector<double> times;
  std::vector<double> omega;  // omega_0(t), right-continuous
  std::vector<double> n;
  std::vector<double> T;
  std::vector<double> U;  // omega_0 n, energy above the ground state
  std::vector<double> P;  // n d(omega_0)/dt on smooth segments
  std::vector<double> J;  // omega_0 gamma (n_B - n)
  std::vector<WorkImpulse> impulses;
  std::vector<double> smooth_work;  // running integral of P
  std::vector<double> heat;         // running integral of J

  /// Sum of impulse works with t1 < t <= t2.
  double impulse_work(double t1, double t2) const;
};

ThermoTrajectory thermo_observables(const OccupancyTrajectory& occupancy, const DriveWaveform& drive,
                                    const SystemParams& params);

struct PeriodicState {
  double relax_time = 0.0;  // pre-run length that passed the certificate
  double residual = 0.0;    // |n(t0 + period) - n(t0)|
  OccupancyTrajectory period;  // one period starting at grid.t_start
  double n_start() const { return period.n.front(); }
};

/// max(10/gamma, 20 period) rounded up to whole periods, or the grid's
/// relax_periods when set.
double relax_time(const SystemParams& params, const DriveWaveform& drive, const SimulationGrid& grid);

/// Runs the drive from n_B(omega_bar, T_e) until the trajectory repeats
/// itself, |n(t0 + period) - n(t0)| < 1e-9 n_B, doubling the pre-run at most
/// twice before giving up with Error{non_convergence}. Constant drives return
/// the flat equilibrium; gamma = 0 returns the starting occupation unchanged.
PeriodicState relax_to_periodic(const SystemParams& params, const DriveWaveform& drive,
                                const SimulationGrid& grid, StepperOptions options = {});

/// Occupation at grid.t_start used by every simulation entry point:
/// the certified periodic state for periodic drives, n_B(omega_bar) for
/// constant drives, n_B(omega_0(t_start)) for tabulated drives.
double initial_occupancy(const SystemParams& params, const DriveWaveform& drive,
                         const SimulationGrid& grid, const StepperOptions& options = {});

}  // namespace qres
