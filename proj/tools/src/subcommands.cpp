#include "subcommands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "qres/analysis.hpp"
#include "qres/counting.hpp"
#include "qres/csv.hpp"
#include "qres/dynamics.hpp"
#include "qres/errors.hpp"
#include "qres/linear_response.hpp"
#include "qres/oracle.hpp"

namespace qres::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kSamplesPerPeriod = 256;

void save(Produced& p, const Request& req, const std::string& name, const CsvTable& table) {
  table.write(req.out / name);
  p.files.push_back(name);
}

ThermoTrajectory run_thermo(const RunConfig& cfg, const DriveWaveform& drive) {
  const double n0 = initial_occupancy(cfg.system, drive, cfg.grid);
  const auto occ = occupancy_trajectory(cfg.system, drive, cfg.grid, n0);
  return thermo_observables(occ, drive, cfg.system);
}

DriveWaveform require_harmonic(const RunConfig& cfg, const std::string& who) {
  if (cfg.drive.kind != DriveKind::harmonic) {
    throw Error(ErrorKind::config, who + " compares against linear response and needs a harmonic drive");
  }
  return cfg.make_drive();
}

// Uniform samples over whole periods [t0, t0 + periods * tau], endpoint included.
std::vector<double> period_samples(double t0, double tau, int periods) {
  return linspace(t0, t0 + periods * tau, periods * kSamplesPerPeriod + 1);
}

std::span<const double> last_period(const std::vector<double>& v) {
  return std::span<const double>(v).last(kSamplesPerPeriod + 1);
}

ordered_json phasor_json(complex z) {
  return {{"re", z.real()}, {"im", z.imag()}, {"modulus", std::abs(z)}, {"argument", std::arg(z)}};
}

}  // namespace

Produced temperature(const RunConfig& cfg, const Request& req) {
  const auto drive = cfg.make_drive();
  const auto th = run_thermo(cfg, drive);
  CsvTable table("t [1/omega_bar], omega0 [omega_bar], n, T [hbar omega_bar/k_B], U, P, J [hbar omega_bar^2], "
                 "T_adiabatic",
                 {"t", "omega0", "n", "T", "U", "P", "J", "T_adiabatic"});
  double lo = th.T.front(), hi = th.T.front();
  for (std::size_t i = 0; i < th.times.size(); ++i) {
    const double t_ad = adiabatic_temperature(th.omega[i], cfg.system.omega_bar, cfg.system.T_e);
    table.add_row({th.times[i], th.omega[i], th.n[i], th.T[i], th.U[i], th.P[i], th.J[i], t_ad});
    lo = std::min(lo, th.T[i]);
    hi = std::max(hi, th.T[i]);
  }
  Produced p;
  save(p, req, "temperature.csv", table);
  p.results = {{"T_min", lo}, {"T_max", hi}, {"T_e", cfg.system.T_e}};
  char buf[128];
  std::snprintf(buf, sizeof buf, "T(t) in [%.6g, %.6g], T_e = %.6g", lo, hi, cfg.system.T_e);
  p.summary = buf;
  return p;
}

Produced thermo(const RunConfig& cfg, const Request& req) {
  const auto drive = cfg.make_drive();
  const auto th = run_thermo(cfg, drive);
  CsvTable table("energies in hbar omega_bar, rates in hbar omega_bar^2; W_smooth and Q are running integrals "
                 "of P and J from t_start",
                 {"t", "omega0", "n", "T", "U", "P", "J", "W_smooth", "Q"});
  for (std::size_t i = 0; i < th.times.size(); ++i) {
    table.add_row({th.times[i], th.omega[i], th.n[i], th.T[i], th.U[i], th.P[i], th.J[i], th.smooth_work[i],
                   th.heat[i]});
  }
  CsvTable impulses("work delivered instantaneously at drive jumps, hbar omega_bar", {"t", "W"});
  double impulse_total = 0.0;
  for (const auto& w : th.impulses) {
    impulses.add_row({w.t, w.work});
    impulse_total += w.work;
  }
  Produced p;
  save(p, req, "thermo.csv", table);
  save(p, req, "impulses.csv", impulses);
  const double dU = th.U.back() - th.U.front();
  const double residual = dU - th.smooth_work.back() - th.heat.back() - impulse_total;
  p.results = {{"delta_U", dU}, {"work_smooth", th.smooth_work.back()}, {"work_impulses", impulse_total},
               {"heat", th.heat.back()}, {"first_law_residual", residual}};
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu samples, %zu impulses, first-law residual %.3g", th.times.size(),
                th.impulses.size(), residual);
  p.summary = buf;
  return p;
}

Produced linear_response(const RunConfig& cfg, const Request& req) {
  const auto drive = require_harmonic(cfg, "linear-response");
  const auto& sys = cfg.system;
  const double Omega = drive.angular_frequency();
  const double dw = drive.amplitude();
  const double phase = drive.phase();
  const complex R[3] = {temperature_response(Omega, sys), power_response(Omega, sys), heat_response(Omega, sys)};
  const double dc[3] = {sys.T_e, 0.0, 0.0};
  auto lr = [&](int k, double t) { return dc[k] + (R[k] * dw * std::polar(1.0, Omega * t + phase)).imag(); };

  const auto th = run_thermo(cfg, drive);
  CsvTable series("simulated T, P, J next to the linear-response prediction for the same drive",
                  {"t", "omega0", "T", "T_lr", "P", "P_lr", "J", "J_lr"});
  for (std::size_t i = 0; i < th.times.size(); ++i) {
    const double t = th.times[i];
    series.add_row({t, th.omega[i], th.T[i], lr(0, t), th.P[i], lr(1, t), th.J[i], lr(2, t)});
  }

  CsvTable transfer("transfer functions per unit drive amplitude: T in k_B/(hbar), P and J in hbar omega_bar",
                    {"Omega", "T_re", "T_im", "T_modulus", "T_argument", "P_re", "P_im", "P_modulus",
                     "P_argument", "J_re", "J_im", "J_modulus", "J_argument"});
  constexpr int kPoints = 81;
  for (int i = 0; i < kPoints; ++i) {
    const double w = std::pow(10.0, -3.0 + 4.0 * i / (kPoints - 1));
    std::vector<double> row{w};
    for (auto kind : {ResponseKind::temperature, ResponseKind::power, ResponseKind::heat}) {
      const complex z = response(kind, w, sys).value;
      row.insert(row.end(), {z.real(), z.imag(), std::abs(z), std::arg(z)});
    }
    transfer.add_row(row);
  }

  // First-harmonic fit on exactly one period of the periodic state.
  SimulationGrid one = cfg.grid;
  const auto times = period_samples(cfg.grid.t_start, drive.period(), 1);
  one.t_end = times.back();
  one.n_samples = static_cast<int>(times.size());
  const auto fit = run_thermo({sys, cfg.drive, one}, drive);
  const std::vector<double>* sim[3] = {&fit.T, &fit.P, &fit.J};
  const char* names[3] = {"temperature", "power", "heat"};
  CsvTable phasors("first-harmonic response per unit drive amplitude; kind 0 = T, 1 = P, 2 = J",
                   {"kind", "sim_re", "sim_im", "lr_re", "lr_im", "relative_error", "phase_error"});
  Produced p;
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const complex A = harmonic_phasor(fit.times, *sim[k], Omega, 1, phase) / dw;
    const double rel = relative_phasor_error(A, R[k]);
    const double dphi = phase_difference(A, R[k]);
    phasors.add_row({double(k), A.real(), A.imag(), R[k].real(), R[k].imag(), rel, dphi});
    p.results[names[k]] = {{"simulated", phasor_json(A)}, {"linear_response", phasor_json(R[k])},
                           {"relative_error", rel}, {"phase_error", dphi}};
    worst = std::max(worst, rel);
  }
  save(p, req, "linear_response.csv", series);
  save(p, req, "transfer_functions.csv", transfer);
  save(p, req, "linear_response_fit.csv", phasors);
  char buf[128];
  std::snprintf(buf, sizeof buf, "largest first-harmonic deviation from linear response %.4g", worst);
  p.summary = buf;
  return p;
}

Produced cumulants(const RunConfig& cfg, const Request& req) {
  const auto drive = cfg.make_drive();
  const int K = req.order;
  if (K < 1) throw Error(ErrorKind::config, "--order must be >= 1");
  const auto traj = cumulant_trajectories(K, cfg.system, drive, cfg.grid);
  std::vector<std::string> cols{"t"};
  for (int k = 1; k <= K; ++k) cols.push_back("c" + std::to_string(k));
  CsvTable table("cumulants of the net number of photons emitted into the reservoir, counted from t_start", cols);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (int k = 1; k <= K; ++k) row.push_back(traj.cumulant(k, i));
    table.add_row(row);
  }
  const auto eq = equilibrium_cumulants(cfg.system.x(), K);
  CsvTable eq_table("long-time cumulants of the undriven resonator at the same x", {"k", "value"});
  for (int k = 1; k <= K; ++k) eq_table.add_row({double(k), eq[static_cast<std::size_t>(k - 1)]});

  Produced p;
  save(p, req, "cumulants.csv", table);
  save(p, req, "cumulants_equilibrium.csv", eq_table);
  p.results = {{"order", K}, {"n_start", traj.n_start}};
  p.summary = std::to_string(traj.times.size()) + " samples of cumulants 1.." + std::to_string(K);
  return p;
}

Produced lr_cumulants(const RunConfig& cfg, const Request& req) {
  const auto drive = require_harmonic(cfg, "lr-cumulants");
  const auto& sys = cfg.system;
  const double Omega = drive.angular_frequency();
  const double tau = drive.period();
  const double dw = drive.amplitude();
  const double phase = drive.phase();
  const int periods = std::max(2, static_cast<int>(std::lround((cfg.grid.t_end - cfg.grid.t_start) / tau)));
  constexpr int K = 4;

  SimulationGrid grid = cfg.grid;
  const auto times = period_samples(grid.t_start, tau, periods);
  grid.t_end = times.back();
  grid.n_samples = static_cast<int>(times.size());
  const auto traj = cumulant_trajectories(K, sys, drive, grid);
  const auto tail_times = last_period(traj.times);

  complex sim[K + 1], lr[K + 1];
  double mean[K + 1] = {};
  std::vector<double> series[K + 1];
  for (int k = 1; k <= K; ++k) {
    series[k] = traj.cumulant_series(k);
    const auto tail = last_period(series[k]);
    sim[k] = harmonic_phasor(tail_times, tail, Omega, 1, phase) / dw;
    lr[k] = cumulant_response(k, Omega, sys);
    for (std::size_t j = 0; j + 1 < tail.size(); ++j) mean[k] += tail[j];
    mean[k] /= static_cast<double>(tail.size() - 1);
  }

  CsvTable table("last period of cumulants 1..4 with the linear-response modulation about the simulated mean",
                 {"t", "c1", "c1_lr", "c2", "c2_lr", "c3", "c3_lr", "c4", "c4_lr"});
  const std::size_t first = traj.times.size() - tail_times.size();
  for (std::size_t i = first; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    std::vector<double> row{t};
    for (int k = 1; k <= K; ++k) {
      row.push_back(series[k][i]);
      row.push_back(mean[k] + (lr[k] * dw * std::polar(1.0, Omega * t + phase)).imag());
    }
    table.add_row(row);
  }
  CsvTable phasors("first-harmonic cumulant response per unit drive amplitude",
                   {"k", "sim_re", "sim_im", "lr_re", "lr_im", "relative_error", "phase_error"});
  Produced p;
  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double rel = relative_phasor_error(sim[k], lr[k]);
    const double dphi = phase_difference(sim[k], lr[k]);
    phasors.add_row({double(k), sim[k].real(), sim[k].imag(), lr[k].real(), lr[k].imag(), rel, dphi});
    p.results["c" + std::to_string(k)] = {{"simulated", phasor_json(sim[k])},
                                          {"linear_response", phasor_json(lr[k])},
                                          {"bracket", cumulant_bracket(k, sys.x())},
                                          {"relative_error", rel}, {"phase_error", dphi}};
    worst = std::max(worst, rel);
  }
  save(p, req, "lr_cumulants.csv", table);
  save(p, req, "lr_cumulant_phasors.csv", phasors);
  char buf[128];
  std::snprintf(buf, sizeof buf, "largest cumulant deviation from linear response %.4g", worst);
  p.summary = buf;
  return p;
}

Produced distribution(const RunConfig& cfg, const Request& req) {
  const auto drive = cfg.make_drive();
  const double t = req.at_time.value_or(cfg.grid.t_end);
  const double x = cfg.system.x();
  if (t < cfg.grid.t_start) throw Error(ErrorKind::domain, "--at-time precedes the counting start t_start");
  CsvTable table("probability of a net transfer of m photons into the reservoir since t_start", {"m", "p"});
  Produced p;
  if (t == cfg.grid.t_start) {
    table.add_row({0.0, 1.0});
    save(p, req, "distribution.csv", table);
    p.results = {{"t", t}, {"zero_duration", true}};
    p.summary = "zero-duration counting: p(0) = 1";
    return p;
  }
  const auto dist = qres::distribution(t, req.m_max, cfg.system, drive, cfg.grid);
  CsvTable eq("long-time distribution of the undriven resonator at the same x", {"m", "p"});
  for (int m = -dist.m_max; m <= dist.m_max; ++m) {
    table.add_row({double(m), dist.probability(m)});
    eq.add_row({double(m), equilibrium_distribution(x, m)});
  }
  const auto mom = moments(dist);
  save(p, req, "distribution.csv", table);
  save(p, req, "distribution_equilibrium.csv", eq);
  p.results = {{"t", t},
               {"m_max", dist.m_max},
               {"n_theta", dist.n_theta},
               {"total", mom.total},
               {"mean", mom.mean},
               {"variance", mom.variance},
               {"third_central", mom.third_central},
               {"fourth_cumulant", mom.fourth_cumulant},
               {"clip_correction", dist.clip_correction},
               {"aliasing_warning", dist.aliasing_warning}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean %.6g, variance %.6g, third central %.6g%s", mom.mean, mom.variance,
                mom.third_central, dist.aliasing_warning ? " (aliasing warning: widen --m-max)" : "");
  p.summary = buf;
  return p;
}

Produced verify_oracle(const RunConfig&, const Request& req) {
  const auto checks = run_oracle_suite();
  Produced p;
  int failed = 0;
  std::string csv = "name,value,threshold,passed,seconds\n";
  ordered_json list = ordered_json::array();
  for (const auto& c : checks) {
    csv += c.name + "," + format_number(c.value) + "," + format_number(c.threshold) + "," +
           (c.passed ? "1" : "0") + "," + format_number(c.seconds) + "\n";
    list.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
    if (!c.passed) ++failed;
  }
  {
    std::ofstream f(req.out / "oracle_distances.csv", std::ios::binary);
    f << csv;
  }
  ordered_json report = {{"passed", failed == 0}, {"checks", list}};
  {
    std::ofstream f(req.out / "oracle_report.json", std::ios::binary);
    f << report.dump(2) << "\n";
  }
  p.files = {"oracle_distances.csv", "oracle_report.json"};
  p.results = report;
  p.failed = failed > 0;
  p.summary = std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks passed";
  return p;
}

}  // namespace qres::cli
