#include "qres/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "qres/errors.hpp"

namespace qres {

namespace {

constexpr double kPeriodicTolerance = 1e-9;

// Jumps in (t0, t1]. A jump that rounding places just after a sample time
// the drive already reports as post-jump is moved onto that sample, so the
// impulse and the jump in U always fall in the same sample interval.
std::vector<double> jump_times(const DriveWaveform& drive, std::span<const double> times) {
  std::vector<double> out;
  if (!drive.is_periodic()) return out;
  const double t0 = times.front();
  const double t1 = times.back();
  const double slack = 1e-9 * drive.period();
  for (double jump : drive.discontinuities(t0 - slack, t1 + slack)) {
    auto it = std::lower_bound(times.begin(), times.end(), jump - slack);
    for (; it != times.end() && *it < jump; ++it) {
      if (drive.on_piece(*it, *it) == drive.on_piece(*it, jump + slack)) {
        jump = *it;
        break;
      }
    }
    if (jump > t0 && jump <= t1) out.push_back(jump);
  }
  return out;
}

}  // namespace

OccupancyTrajectory occupancy_trajectory(const SystemParams& params, const DriveWaveform& drive,
                                         std::span<const double> times, double n_init,
                                         const StepperOptions& options) {
  validate(params);
  if (times.size() < 2) throw Error(ErrorKind::grid_mismatch, "occupancy_trajectory needs two or more times");
  if (!(n_init >= 0.0) || !std::isfinite(n_init)) {
    throw Error(ErrorKind::domain, "initial occupation must be non-negative");
  }
  const double t0 = times.front();
  const double t1 = times.back();
  const auto jumps = jump_times(drive, times);
  std::vector<double> cuts;
  if (drive.is_periodic()) {
    for (double t : jumps) {
      if (t < t1) cuts.push_back(t);
    }
  } else {
    cuts = drive.breakpoints(t0, t1);
  }

  // Stops: every sample plus every jump, so the occupation at each jump is recorded.
  std::vector<double> stops(times.begin(), times.end());
  stops.insert(stops.end(), jumps.begin(), jumps.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const double gamma = params.gamma;
  const double T_e = params.T_e;
  auto rhs = [&](const Piece& piece, double t, const Eigen::Vector3d& y, Eigen::Vector3d& dy) {
    const double w = drive.on_piece(t, piece.mid());
    const double flow = gamma * (bose_einstein(w, T_e) - y[0]);
    dy[0] = flow;
    dy[1] = y[0] * drive.rate_on_piece(t, piece.mid());
    dy[2] = w * flow;
  };

  OccupancyTrajectory out;
  out.times.assign(times.begin(), times.end());
  out.n.resize(times.size());
  out.smooth_work.resize(times.size());
  out.heat.resize(times.size());

  std::size_t sample = 0;
  std::size_t jump = 0;
  Eigen::Vector3d y(n_init, 0.0, 0.0);
  auto observe = [&](std::size_t, double t, const Eigen::Vector3d& state) {
    while (sample < times.size() && times[sample] == t) {
      out.n[sample] = state[0];
      out.smooth_work[sample] = state[1];
      out.heat[sample] = state[2];
      ++sample;
    }
    if (jump < jumps.size() && jumps[jump] == t) {
      const double before = drive.on_piece(t, t - 1e-9 * std::max(1.0, drive.period()));
      out.jumps.push_back({t, state[0], before, drive(t)});
      ++jump;
    }
  };
  integrate(rhs, y, t0, std::span<const double>(stops), cuts, options, observe);
  if (sample != times.size()) throw Error(ErrorKind::grid_mismatch, "sample times must be sorted");
  return out;
}

OccupancyTrajectory occupancy_trajectory(const SystemParams& params, const DriveWaveform& drive,
                                         const SimulationGrid& grid, double n_init,
                                         StepperOptions options) {
  options.dt_max = std::min(options.dt_max, grid.dt_max);
  const auto times = grid.sample_times();
  return occupancy_trajectory(params, drive, std::span<const double>(times), n_init, options);
}

double temperature_from_occupancy(double n, double omega) {
  if (!(n > 0.0)) throw Error(ErrorKind::domain, "temperature_from_occupancy: n must be positive");
  if (!(omega > 0.0)) throw Error(ErrorKind::domain, "temperature_from_occupancy: omega must be positive");
  return omega / std::log1p(1.0 / n);
}

double adiabatic_temperature(double omega_t, double omega_ref, double T_ref) {
  if (!(omega_t > 0.0 && omega_ref > 0.0 && T_ref > 0.0)) {
    throw Error(ErrorKind::domain, "adiabatic_temperature: arguments must be positive");
  }
  return omega_t / omega_ref * T_ref;
}

double ThermoTrajectory::impulse_work(double t1, double t2) const {
  double sum = 0.0;
  for (const auto& imp : impulses) {
    if (imp.t > t1 && imp.t <= t2) sum += imp.work;
  }
  return sum;
}

ThermoTrajectory thermo_observables(const OccupancyTrajectory& occ, const DriveWaveform& drive,
                                    const SystemParams& params) {
  const std::size_t m = occ.times.size();
  if (m == 0 || occ.n.size() != m || occ.smooth_work.size() != m || occ.heat.size() != m) {
    throw Error(ErrorKind::grid_mismatch, "occupancy series does not match its time grid");
  }
  ThermoTrajectory out;
  out.times = occ.times;
  out.n = occ.n;
  out.smooth_work = occ.smooth_work;
  out.heat = occ.heat;
  out.omega.resize(m);
  out.T.resize(m);
  out.U.resize(m);
  out.P.resize(m);
  out.J.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = occ.times[i];
    const double w = drive(t);
    const double n = occ.n[i];
    out.omega[i] = w;
    out.T[i] = n > 0.0 ? temperature_from_occupancy(n, w) : 0.0;
    out.U[i] = w * n;
    out.P[i] = n * drive.rate(t);
    out.J[i] = w * params.gamma * (bose_einstein(w, params.T_e) - n);
  }
  for (const auto& j : occ.jumps) {
    out.impulses.push_back({j.t, j.n * (j.omega_after - j.omega_before)});
  }
  return out;
}

double relax_time(const SystemParams& params, const DriveWaveform& drive, const SimulationGrid& grid) {
  if (!drive.is_periodic()) throw Error(ErrorKind::domain, "relax_time requires a periodic drive");
  const double period = drive.period();
  if (grid.relax_periods > 0) return grid.relax_periods * period;
  if (params.gamma == 0.0) return 0.0;
  const double wanted = std::max(10.0 / params.gamma, 20.0 * period);
  return std::ceil(wanted / period - 1e-12) * period;
}

PeriodicState relax_to_periodic(const SystemParams& params, const DriveWaveform& drive,
                                const SimulationGrid& grid, StepperOptions options) {
  validate(params);
  validate(grid);
  options.dt_max = std::min(options.dt_max, grid.dt_max);
  const double n_eq = bose_einstein(params.omega_bar, params.T_e);
  const double t0 = grid.t_start;

  PeriodicState state;
  if (drive.kind() == DriveKind::constant || params.gamma == 0.0) {
    const double span = drive.is_periodic() ? drive.period() : grid.t_end - grid.t_start;
    const auto times = linspace(t0, t0 + span, grid.n_samples);
    state.period = occupancy_trajectory(params, drive, std::span<const double>(times), n_eq, options);
    return state;
  }
  if (!drive.is_periodic()) {
    throw Error(ErrorKind::domain, "relax_to_periodic requires a periodic or constant drive");
  }

  const double period = drive.period();
  const auto one_period = linspace(t0, t0 + period, grid.n_samples);
  double pre_run = relax_time(params, drive, grid);
  for (int attempt = 0; attempt < 3; ++attempt, pre_run *= 2.0) {
    const double start = t0 - pre_run;
    double n0 = n_eq;
    if (pre_run > 0.0) {
      const double span[] = {start, t0};
      n0 = occupancy_trajectory(params, drive, std::span<const double>(span), n_eq, options).n.back();
    }
    state.period = occupancy_trajectory(params, drive, std::span<const double>(one_period), n0, options);
    state.relax_time = pre_run;
    state.residual = std::abs(state.period.n.back() - state.period.n.front());
    if (state.residual < kPeriodicTolerance * n_eq) return state;
  }
  throw Error(ErrorKind::non_convergence,
              "periodic-state certificate failed after two doublings of the relaxation time");
}

double initial_occupancy(const SystemParams& params, const DriveWaveform& drive,
                         const SimulationGrid& grid, const StepperOptions& options) {
  switch (drive.kind()) {
    case DriveKind::constant:
      return bose_einstein(params.omega_bar, params.T_e);
    case DriveKind::tabulated:
      return bose_einstein(drive(grid.t_start), params.T_e);
    default:
      return relax_to_periodic(params, drive, grid, options).n_start();
  }
}

}  // namespace qres
