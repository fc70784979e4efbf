// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qres/analysis.hpp"
#include "qres/counting.hpp"
#include "qres/dynamics.hpp"
#include "qres/errors.hpp"
#include "qres/linear_response.hpp"
#include "qres/model.hpp"
#include "qres/oracle.hpp"

using namespace qres;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTau = kTwoPi / 0.1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ThermoTrajectory periodic_thermo(const SystemParams& p, const DriveWaveform& d, std::span<const double> times) {
  const SimulationGrid grid{times.front(), times.back(), 0.5, 2, 0};
  const double n0 = initial_occupancy(p, d, grid);
  return thermo_observables(occupancy_trajectory(p, d, times, n0), d, p);
}

Verdict adiabatic_law() {
  const SystemParams p{1.0, 0.0, 1.5};
  const auto d = DriveWaveform::harmonic(1.0, 0.7, kTau);
  const auto times = linspace(0.0, 5 * kTau, 2001);
  const auto th = periodic_thermo(p, d, times);
  const double ref = p.omega_bar / p.T_e;
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(th.omega[i] / th.T[i] - ref) / ref);
  return {worst < 1e-9, fmt("max |w/T - w_bar/T_e| / (w_bar/T_e) = %.3g (limit 1e-9)", worst)};
}

Verdict first_law() {
  const SystemParams p{1.0, 0.05, 1.5};
  const auto times = linspace(0.0, 3 * kTau, 1201);
  double worst_ratio = 0.0;
  std::string detail;
  for (const auto& d : {DriveWaveform::square(1.0, 0.7, kTau), DriveWaveform::sawtooth(1.0, 0.7, kTau),
                        DriveWaveform::harmonic(1.0, 0.7, kTau)}) {
    const auto th = periodic_thermo(p, d, times);
    const double scale = *std::max_element(th.U.begin(), th.U.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      const double dU = th.U[i + 1] - th.U[i];
      const double W = th.smooth_work[i + 1] - th.smooth_work[i];
      const double Q = th.heat[i + 1] - th.heat[i];
      worst = std::max(worst, std::abs(dU - W - Q - th.impulse_work(times[i], times[i + 1])));
    }
    worst_ratio = std::max(worst_ratio, worst / std::abs(scale));
    detail += fmt("%s %.2g, ", to_string(d.kind()).c_str(), worst / std::abs(scale));
  }
  return {worst_ratio < 1e-6, "residual / max|U|: " + detail + "limit 1e-6"};
}

struct Phasors {
  complex T, P, J;
};

Phasors lr_phasors(double dw, const SystemParams& p) {
  const auto d = DriveWaveform::harmonic(1.0, dw, kTau);
  const auto times = linspace(0.0, kTau, 2049);
  const auto th = periodic_thermo(p, d, times);
  return {harmonic_phasor(times, th.T, 0.1) / dw, harmonic_phasor(times, th.P, 0.1) / dw,
          harmonic_phasor(times, th.J, 0.1) / dw};
}

Verdict transfer_functions() {
  const SystemParams p{1.0, 0.1, 1.5};
  const Phasors small = lr_phasors(0.01, p);
  const Phasors large = lr_phasors(0.5, p);
  const complex R[] = {temperature_response(0.1, p), power_response(0.1, p), heat_response(0.1, p)};
  const complex S[] = {small.T, small.P, small.J};
  const complex L[] = {large.T, large.P, large.J};
  const char* names[] = {"T", "P", "J"};
  bool ok = true;
  std::string detail;
  double least_large = 1e9;
  for (int k = 0; k < 3; ++k) {
    const double amp = std::abs(std::abs(S[k]) / std::abs(R[k]) - 1.0);
    const double phase = std::abs(phase_difference(S[k], R[k]));
    const double dev = relative_phasor_error(L[k], R[k]);
    ok = ok && amp < 0.01 && phase < 0.02;
    least_large = std::min(least_large, dev);
    detail += fmt("%s amp %.2g phase %.2g large-drive deviation %.3g; ", names[k], amp, phase, dev);
  }
  ok = ok && least_large > 0.05;
  return {ok, detail + "limits 1%, 0.02 rad, >5%"};
}

Verdict equilibrium_counting() {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto d = DriveWaveform::constant(1.0);
  const double nb = bose_einstein(1.0, 4.0);
  const std::vector<double> times = {0.0, 400.0};
  double worst_cgf = 0.0;
  for (double s : {-0.1, -0.05, 0.05, 0.1}) {
    const auto cs = evolve_counting(s, p, d, times, nb);
    worst_cgf = std::max(worst_cgf, std::abs(cs.back().C - equilibrium_cgf(s, 0.25)));
  }
  const auto tr = propagate_jets(4, p, d, linspace(0.0, 400.0, 401), nb);
  const double k2 = tr.cumulant(2, 400);
  const double k4 = tr.cumulant(4, 400);
  double odd = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    odd = std::max({odd, std::abs(tr.cumulant(1, i)), std::abs(tr.cumulant(3, i))});
  }
  const double e2 = std::abs(k2 / 31.834 - 1.0);
  const double e4 = std::abs(k4 / 3071.9 - 1.0);
  return {worst_cgf < 1e-6 && e2 < 1e-4 && e4 < 1e-4 && odd < 1e-8,
          fmt("|C - C_eq| = %.2g (1e-6); k2 = %.8g (rel %.2g); k4 = %.8g (rel %.2g); max odd %.2g (1e-8)",
              worst_cgf, k2, e2, k4, e4, odd)};
}

Verdict distribution_inversion() {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto dist = distribution_between(0.0, 300.0, bose_einstein(1.0, 4.0), 80, p, DriveWaveform::constant(1.0));
  double worst = 0.0;
  for (int m = -10; m <= 10; ++m) worst = std::max(worst, std::abs(dist.probability(m) - equilibrium_distribution(0.25, m)));
  const double norm = std::abs(dist.total() - 1.0);
  return {worst < 1e-8 && norm < 1e-8, fmt("max |p - p_eq| over |m| <= 10 = %.2g; |sum p - 1| = %.2g (limits 1e-8)", worst, norm)};
}

Verdict oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams p{1.0, 0.1, 1.0};
  const auto d = DriveWaveform::harmonic(1.0, 0.3, kTau);
  const SimulationGrid grid{0.0, kTau, 0.5, 2, 0};
  const double n0 = initial_occupancy(p, d, grid);
  constexpr int kNmax = 40;
  constexpr int kWindow = 30;
  const auto initial = thermal_state(n0, kNmax);
  const auto counted = distribution_between(0.0, kTau, n0, kWindow, p, d);
  const auto theta = fock_distribution(initial, d, p, 0.0, kTau, kWindow);
  const std::vector<double> times = {0.0, kTau};
  const auto ladder = m_resolved_evolve(initial, d, p, kWindow, times);
  const double tv_theta = total_variation(counted, theta);
  const double tv_ladder = total_variation(counted.p, ladder.p.back());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {tv_theta < 1e-4 && tv_ladder < 1e-4 && seconds < 300.0,
          fmt("TV theta-grid %.2g, TV ladder %.2g (limit 1e-4); %.1f s (limit 300)", tv_theta, tv_ladder, seconds)};
}

Verdict lr_cumulants() {
  const SystemParams p{1.0, 0.1, 4.0};
  const double dw = 0.01;
  const auto d = DriveWaveform::harmonic(1.0, dw, kTau);
  constexpr int kPerPeriod = 256;
  constexpr int kPeriods = 6;
  const auto times = linspace(0.0, kPeriods * kTau, kPeriods * kPerPeriod + 1);
  const SimulationGrid grid{0.0, kPeriods * kTau, 0.5, 2, 0};
  const auto tr = propagate_jets(4, p, d, times, initial_occupancy(p, d, grid));
  const std::vector<double> tail_t(times.end() - kPerPeriod - 1, times.end());
  bool ok = std::abs(cumulant_bracket(2, 0.25) + 8.0416) < 1e-4;
  std::string detail = fmt("bracket(2) = %.6f; ", cumulant_bracket(2, 0.25));
  complex sim[5];
  for (int k = 1; k <= 4; ++k) {
    const auto series = tr.cumulant_series(k);
    const std::vector<double> tail(series.end() - kPerPeriod - 1, series.end());
    sim[k] = harmonic_phasor(tail_t, tail, 0.1) / dw;
    const complex lr = cumulant_response(k, 0.1, p);
    const double amp = std::abs(std::abs(sim[k]) / std::abs(lr) - 1.0);
    ok = ok && amp < 0.02;
    detail += fmt("k=%d amp %.2g arg %+.3f; ", k, amp, std::arg(sim[k]));
  }
  // In phase: positive projection on the drive. Out of phase: negative.
  const bool phases = sim[3].real() > 0.0 && sim[2].real() < 0.0 && sim[4].real() < 0.0 &&
                      cumulant_response(3, 0.1, p).real() > 0.0 && cumulant_response(2, 0.1, p).real() < 0.0 &&
                      cumulant_response(4, 0.1, p).real() < 0.0;
  return {ok && phases, detail + (phases ? "phase signs ok" : "phase signs wrong") + " (limit 2%)"};
}

Verdict jets_vs_fd() {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto d = DriveWaveform::harmonic(1.0, 0.6, kTau);
  const SimulationGrid grid{0.0, 6 * kTau, 0.5, 2, 0};
  const double n0 = initial_occupancy(p, d, grid);
  std::vector<double> times = {0.0};
  for (int j = 0; j < 20; ++j) times.push_back((0.15 + 0.29 * j) * kTau);
  CountingOptions opt;
  opt.stepper.fixed_step = 0.05;
  const auto tr = propagate_jets(4, p, d, times, n0, opt);
  const double h = 1e-3;
  std::vector<std::vector<CountingState>> runs;
  for (int j = -3; j <= 3; ++j) runs.push_back(evolve_counting(j * h, p, d, times, n0, opt));
  double worst = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    auto f = [&](int j) { return runs[static_cast<std::size_t>(j + 3)][i].C.real(); };
    const double fd[] = {
        (-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h),
        (-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h),
        (-f(3) + 8 * f(2) - 13 * f(1) + 13 * f(-1) - 8 * f(-2) + f(-3)) / (8 * h * h * h),
        (-f(3) + 12 * f(2) - 39 * f(1) + 56 * f(0) - 39 * f(-1) + 12 * f(-2) - f(-3)) / (6 * h * h * h * h)};
    for (int k = 1; k <= 4; ++k) {
      const double jet = tr.cumulant(k, i);
      worst = std::max(worst, std::abs(fd[k - 1] - jet) / std::abs(jet));
    }
  }
  return {worst < 1e-4, fmt("max relative jet/finite-difference error %.2g over 20 times, orders 1-4 (limit 1e-4)", worst)};
}

Verdict figure_shape() {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto d = DriveWaveform::harmonic(1.0, 0.6, kTau);
  const double t = 5.85 * kTau;
  const SimulationGrid grid{0.0, t, 0.5, 2, 0};
  const auto dist = distribution(t, 250, p, d, grid);
  const auto mom = moments(dist);
  const auto tr = cumulant_trajectories(4, p, d, grid);
  const auto eq = equilibrium_cumulants(0.25, 4);
  const double k2 = tr.cumulant(2, 1), k3 = tr.cumulant(3, 1), k4 = tr.cumulant(4, 1);
  const bool wider = k2 > eq[1] && mom.variance > eq[1];
  const bool left = mom.third_central < 0.0 && k3 < 0.0;
  const bool heavy = mom.fourth_cumulant > eq[3] && k4 > eq[3];
  return {wider && left && heavy,
          fmt("t = 5.85 tau: variance %.5g vs eq %.5g; mu3 %.5g (jet %.5g); fourth cumulant %.6g (jet %.6g) vs eq %.6g",
              mom.variance, eq[1], mom.third_central, k3, mom.fourth_cumulant, k4, eq[3])};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"adiabatic law", adiabatic_law},
      {"first law", first_law},
      {"linear-response transfer functions", transfer_functions},
      {"equilibrium counting statistics", equilibrium_counting},
      {"distribution inversion", distribution_inversion},
      {"cross-method oracle equivalence", oracle_equivalence},
      {"linear-response cumulants", lr_cumulants},
      {"jet correctness", jets_vs_fd},
      {"qualitative distribution shape", figure_shape},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const Error& e) {
      v = {false, std::string("threw ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
