#include "qres/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "qres/dynamics.hpp"
#include "qres/errors.hpp"
#include "qres/linear_response.hpp"
#include "qres/parallel.hpp"

namespace qres {

namespace {

constexpr double kTruncationLimit = 1e-8;
constexpr double kLeakageLimit = 1e-8;

using Triplet = Eigen::Triplet<complex>;

void check_truncation(int n_max) {
  if (n_max < 2 || n_max > kMaxFockTruncation) {
    throw Error(ErrorKind::domain, "Fock truncation must satisfy 2 <= N_max <= " +
                                       std::to_string(kMaxFockTruncation));
  }
}

// Diagonal of the truncated a a^dag: k + 1 below the top level, 0 at it.
double raised(int k, int n_max) { return k < n_max ? k + 1.0 : 0.0; }

SuperOperator diagonal_super(int n_max, auto&& entry) {
  const int d = n_max + 1;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const complex v = entry(i, j);
      if (v != complex{}) t.emplace_back(i + d * j, i + d * j, v);
    }
  }
  SuperOperator out(d * d, d * d);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// (a rho a^dag)_ij = sqrt((i+1)(j+1)) rho_{i+1,j+1} when shift = +1,
// (a^dag rho a)_ij = sqrt(i j) rho_{i-1,j-1} when shift = -1.
SuperOperator shift_super(int n_max, int shift) {
  const int d = n_max + 1;
  std::vector<Triplet> t;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const int si = i + shift;
      const int sj = j + shift;
      if (si < 0 || sj < 0 || si >= d || sj >= d) continue;
      const double w = shift > 0 ? std::sqrt((i + 1.0) * (j + 1.0)) : std::sqrt(double(i) * j);
      if (w != 0.0) t.emplace_back(i + d * j, si + d * sj, complex{w, 0.0});
    }
  }
  SuperOperator out(d * d, d * d);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

struct Rates {
  double omega;
  double emission;    // g (1 + n_B)
  double absorption;  // g n_B
};

Rates rates_at(const DriveWaveform& drive, const SystemParams& params, const Piece& piece, double t) {
  const double omega = drive.on_piece(t, piece.mid());
  const double nb = params.gamma > 0.0 ? bose_einstein(omega, params.T_e) : 0.0;
  return {omega, params.gamma * (1.0 + nb), params.gamma * nb};
}

std::vector<double> integration_breakpoints(const DriveWaveform& drive, std::span<const double> times) {
  return drive.breakpoints(times.front(), times.back());
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw Error(ErrorKind::domain, "oracle evolution needs at least one time");
}

template <class Fn>
OracleCheck timed_check(const std::string& name, double threshold, Fn&& metric) {
  const auto start = std::chrono::steady_clock::now();
  OracleCheck c;
  c.name = name;
  c.threshold = threshold;
  try {
    c.value = metric();
    c.passed = std::isfinite(c.value) && c.value < threshold;
  } catch (const std::exception&) {
    c.value = std::numeric_limits<double>::infinity();
    c.passed = false;
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace

complex FockState::trace() const {
  complex acc{};
  for (int k = 0; k < dimension(); ++k) acc += element(k, k);
  return acc;
}

complex FockState::mean_occupation() const {
  complex acc{};
  for (int k = 0; k < dimension(); ++k) acc += double(k) * element(k, k);
  return acc;
}

ComplexMatrix FockState::matrix() const {
  return Eigen::Map<const ComplexMatrix>(rho.data(), dimension(), dimension());
}

FockState thermal_state(double n_occ, int n_max) {
  check_truncation(n_max);
  if (!(n_occ >= 0.0) || !std::isfinite(n_occ)) {
    throw Error(ErrorKind::domain, "thermal_state: occupation must be non-negative");
  }
  const double r = n_occ / (1.0 + n_occ);
  if (std::pow(r, n_max) > kTruncationLimit) {
    throw Error(ErrorKind::truncation, "thermal_state: top level population exceeds 1e-8");
  }
  const int d = n_max + 1;
  FockState out;
  out.n_max = n_max;
  out.rho = ComplexVector::Zero(d * d);
  double norm = 0.0;
  double w = 1.0;
  for (int k = 0; k < d; ++k) {
    out.rho[k + d * k] = w;
    norm += w;
    w *= r;
  }
  out.rho /= norm;
  return out;
}

GeneratorParts generator_parts(int n_max) {
  check_truncation(n_max);
  GeneratorParts g;
  g.n_max = n_max;
  g.commutator = diagonal_super(n_max, [](int i, int j) { return complex{0.0, -(i - j) * 1.0}; });
  g.emission = shift_super(n_max, +1);
  g.absorption = shift_super(n_max, -1);
  g.emission_loss = diagonal_super(n_max, [](int i, int j) { return complex{-0.5 * (i + j), 0.0}; });
  g.absorption_loss = diagonal_super(n_max, [n_max](int i, int j) {
    return complex{-0.5 * (raised(i, n_max) + raised(j, n_max)), 0.0};
  });
  return g;
}

SuperOperator build_tilted_generator(complex s, double omega, const SystemParams& params, int n_max) {
  validate(params);
  if (!(omega > 0.0)) throw Error(ErrorKind::domain, "build_tilted_generator: omega must be positive");
  const auto g = generator_parts(n_max);
  const double nb = bose_einstein(omega, params.T_e);
  const double ge = params.gamma * (1.0 + nb);
  const double ga = params.gamma * nb;
  SuperOperator out = complex{omega, 0.0} * g.commutator;
  out += (ge * std::exp(s)) * g.emission;
  out += complex{ge, 0.0} * g.emission_loss;
  out += (ga * std::exp(-s)) * g.absorption;
  out += complex{ga, 0.0} * g.absorption_loss;
  out.makeCompressed();
  return out;
}

FockEvolution evolve_fock(const FockState& initial, const DriveWaveform& drive, const SystemParams& params,
                          complex s, std::span<const double> times, const StepperOptions& options) {
  validate(params);
  drive.validate();
  check_times(times);
  const auto g = generator_parts(initial.n_max);
  const int d = initial.dimension();
  const int top = initial.n_max + d * initial.n_max;
  const complex es = std::exp(s);
  const complex ems = std::exp(-s);

  // Loss and commutator terms are diagonal; keep them as vectors.
  ComplexVector comm = g.commutator.diagonal();
  ComplexVector loss_e = g.emission_loss.diagonal();
  ComplexVector loss_a = g.absorption_loss.diagonal();

  auto rhs = [&](const Piece& piece, double t, const ComplexVector& y, ComplexVector& dy) {
    const Rates r = rates_at(drive, params, piece, t);
    dy = (r.omega * comm + r.emission * loss_e + r.absorption * loss_a).cwiseProduct(y);
    dy.noalias() += (r.emission * es) * (g.emission * y);
    dy.noalias() += (r.absorption * ems) * (g.absorption * y);
  };

  FockEvolution out;
  out.times.assign(times.begin(), times.end());
  out.M.resize(times.size());
  ComplexVector y = initial.rho;
  const auto cuts = integration_breakpoints(drive, times);
  auto observe = [&](std::size_t i, double, const ComplexVector& state) {
    complex tr{};
    for (int k = 0; k < d; ++k) tr += state[k + d * k];
    out.M[i] = tr;
    const double health = std::abs(state[top]) / std::max(1.0, std::abs(tr));
    out.max_top_population = std::max(out.max_top_population, health);
    if (health > kTruncationLimit) {
      throw Error(ErrorKind::truncation, "evolve_fock: top Fock level population exceeds 1e-8");
    }
  };
  integrate(rhs, y, times.front(), times, cuts, options, observe);
  out.final_state = FockState{initial.n_max, std::move(y), s};
  return out;
}

complex MResolvedState::trace(int m) const {
  const ComplexVector& r = rho[static_cast<std::size_t>(m + m_window)];
  const int d = n_max + 1;
  complex acc{};
  for (int k = 0; k < d; ++k) acc += r[k + d * k];
  return acc;
}

ComplexVector MResolvedState::marginal() const {
  ComplexVector acc = ComplexVector::Zero(rho.front().size());
  for (const auto& r : rho) acc += r;
  return acc;
}

MResolvedEvolution m_resolved_evolve(const FockState& initial, const DriveWaveform& drive,
                                     const SystemParams& params, int m_window,
                                     std::span<const double> times, const StepperOptions& options) {
  validate(params);
  drive.validate();
  check_times(times);
  if (m_window < 1) throw Error(ErrorKind::window, "m_resolved_evolve: window must be >= 1");
  const auto g = generator_parts(initial.n_max);
  const int d = initial.dimension();
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  const int width = 2 * m_window + 1;

  ComplexVector comm = g.commutator.diagonal();
  ComplexVector loss_e = g.emission_loss.diagonal();
  ComplexVector loss_a = g.absorption_loss.diagonal();

  // Column c of the state matrix is rho(m = c - M). Emission moves weight
  // from m - 1 to m, absorption from m + 1 to m; flux leaving the window is dropped.
  auto rhs = [&](const Piece& piece, double t, const ComplexVector& y, ComplexVector& dy) {
    const Rates r = rates_at(drive, params, piece, t);
    Eigen::Map<const ComplexMatrix> R(y.data(), block, width);
    Eigen::Map<ComplexMatrix> dR(dy.data(), block, width);
    const ComplexVector diag = r.omega * comm + r.emission * loss_e + r.absorption * loss_a;
    dR = diag.asDiagonal() * R;
    if (width > 1) {
      dR.rightCols(width - 1).noalias() += r.emission * (g.emission * R.leftCols(width - 1));
      dR.leftCols(width - 1).noalias() += r.absorption * (g.absorption * R.rightCols(width - 1));
    }
  };

  ComplexVector y = ComplexVector::Zero(block * width);
  y.segment(block * m_window, block) = initial.rho;

  MResolvedEvolution out;
  out.times.assign(times.begin(), times.end());
  out.p.resize(times.size());
  auto observe = [&](std::size_t i, double, const ComplexVector& state) {
    auto& row = out.p[i];
    row.resize(static_cast<std::size_t>(width));
    double total = 0.0;
    for (int c = 0; c < width; ++c) {
      complex tr{};
      for (int k = 0; k < d; ++k) tr += state[block * c + k + d * k];
      row[static_cast<std::size_t>(c)] = tr.real();
      total += tr.real();
    }
    const double edge = std::max(std::abs(row.front()), std::abs(row.back()));
    out.max_leakage = std::max(out.max_leakage, edge);
    out.max_norm_error = std::max(out.max_norm_error, std::abs(total - 1.0));
    if (edge > kLeakageLimit) {
      throw Error(ErrorKind::leakage, "m_resolved_evolve: boundary of the m window populated above 1e-8");
    }
  };
  integrate(rhs, y, times.front(), times, integration_breakpoints(drive, times), options, observe);

  out.final_state.n_max = initial.n_max;
  out.final_state.m_window = m_window;
  out.final_state.rho.reserve(static_cast<std::size_t>(width));
  for (int c = 0; c < width; ++c) out.final_state.rho.emplace_back(y.segment(block * c, block));
  return out;
}

PhotonDistribution fock_distribution(const FockState& initial, const DriveWaveform& drive,
                                     const SystemParams& params, double t0, double t, int m_max,
                                     const StepperOptions& options, unsigned threads) {
  if (m_max < 1) throw Error(ErrorKind::window, "m_max must be >= 1");
  if (t < t0) throw Error(ErrorKind::domain, "distribution time precedes the counting start");
  const int n = theta_grid_size(m_max);
  const auto theta = theta_grid(n);
  std::vector<complex> M(static_cast<std::size_t>(n), complex{1.0, 0.0});
  if (t > t0) {
    const double span[] = {t0, t};
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t j) {
          M[j] = evolve_fock(initial, drive, params, complex{0.0, theta[j]}, span, options).M.back();
        },
        threads);
  }
  return invert_generating_function(M, m_max, t);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::window, "total_variation: m windows differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double total_variation(const PhotonDistribution& p, const PhotonDistribution& q) {
  if (p.m_max != q.m_max) throw Error(ErrorKind::window, "total_variation: m windows differ");
  return total_variation(std::span<const double>(p.p), std::span<const double>(q.p));
}

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options) {
  const int N = options.n_max;
  const int M = options.m_window;
  std::vector<OracleCheck> out;

  SystemParams eq{1.0, 0.1, 1.0};
  const double nb = bose_einstein(1.0, 1.0);
  const auto still = DriveWaveform::constant(1.0);

  out.push_back(timed_check("generator_trace_preservation", 1e-12, [&] {
    const auto L = build_tilted_generator(complex{}, 1.0, eq, N);
    const int d = N + 1;
    double worst = 0.0;
    Eigen::RowVectorXcd left = Eigen::RowVectorXcd::Zero(d * d);
    for (int k = 0; k < d; ++k) left[k + d * k] = 1.0;
    const Eigen::RowVectorXcd residual = left * L;
    for (Eigen::Index i = 0; i < residual.size(); ++i) worst = std::max(worst, std::abs(residual[i]));
    return worst;
  }));

  out.push_back(timed_check("generator_equilibrium_stationary", 1e-10, [&] {
    const auto L = build_tilted_generator(complex{}, 1.0, eq, N);
    const ComplexVector r = L * thermal_state(nb, N).rho;
    return r.cwiseAbs().maxCoeff();
  }));

  out.push_back(timed_check("generator_first_moment", 1e-10, [&] {
    // Arbitrary Hermitian trace-one state with negligible top-level weight.
    const int d = N + 1;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    ComplexMatrix A(d, d);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        A(i, j) = complex{gauss(rng), gauss(rng)} * std::pow(0.5, 0.5 * (i + j));
      }
    }
    ComplexMatrix rho = A * A.adjoint();
    rho /= rho.trace();
    const ComplexVector v = Eigen::Map<const ComplexVector>(rho.data(), d * d);
    const ComplexVector dv = build_tilted_generator(complex{}, 1.0, eq, N) * v;
    complex n{}, dn{};
    for (int k = 0; k < d; ++k) {
      n += double(k) * v[k + d * k];
      dn += double(k) * dv[k + d * k];
    }
    return std::abs(dn - eq.gamma * (nb - n));
  }));

  out.push_back(timed_check("undriven_characteristic_function", 1e-6, [&] {
    const auto start = thermal_state(nb, N);
    const double times[] = {0.0, 10.0, 50.0, 200.0};
    double worst = 0.0;
    for (double theta : {std::numbers::pi / 4, std::numbers::pi / 2}) {
      const complex s{0.0, theta};
      const auto fock = evolve_fock(start, still, eq, s, times);
      const auto ode = evolve_counting(s, eq, still, times, complex{nb, 0.0});
      for (std::size_t i = 1; i < 4; ++i) {
        worst = std::max(worst, std::abs(std::log(fock.M[i] / ode[i].M())));
      }
    }
    return worst;
  }));

  out.push_back(timed_check("equilibrium_distribution_m_resolved", 1e-5, [&] {
    const double times[] = {0.0, 300.0};
    const auto ev = m_resolved_evolve(thermal_state(nb, N), still, eq, M, times);
    std::vector<double> ref;
    for (int m = -M; m <= M; ++m) ref.push_back(equilibrium_distribution(1.0, m));
    return total_variation(ev.p.back(), ref);
  }));

  // Driven case shared by the remaining checks: one period of counting from
  // the periodic state.
  const auto drive = DriveWaveform::harmonic(1.0, 0.3, 2.0 * std::numbers::pi / 0.1);
  const double tau = drive.period();
  SimulationGrid grid{0.0, tau, 1.0, 2, 0};
  const double n0 = initial_occupancy(eq, drive, grid);
  const auto start = thermal_state(n0, N);
  const auto samples = linspace(0.0, tau, 21);

  CountingOptions copt;
  copt.threads = options.threads;
  const auto reference = distribution_between(0.0, tau, n0, M, eq, drive, copt);

  MResolvedEvolution ladder;
  out.push_back(timed_check("driven_tv_m_resolved", 1e-4, [&] {
    ladder = m_resolved_evolve(start, drive, eq, M, samples);
    return total_variation(std::span<const double>(ladder.p.back()), std::span<const double>(reference.p));
  }));

  out.push_back(timed_check("driven_tv_tilted_theta_grid", 1e-4, [&] {
    const auto theta_route = fock_distribution(start, drive, eq, 0.0, tau, M, {}, options.threads);
    return total_variation(theta_route, reference);
  }));

  out.push_back(timed_check("m_resolved_marginalization", 1e-8, [&] {
    if (ladder.p.empty()) throw Error(ErrorKind::numerical, "ladder run failed");
    const auto plain = evolve_fock(start, drive, eq, complex{}, samples);
    return (ladder.final_state.marginal() - plain.final_state.rho).cwiseAbs().maxCoeff();
  }));

  out.push_back(timed_check("moment_bridge", 1e-6, [&] {
    if (ladder.p.empty()) throw Error(ErrorKind::numerical, "ladder run failed");
    const auto jets = propagate_jets(1, eq, drive, samples, n0);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double mean = 0.0;
      for (int m = -M; m <= M; ++m) mean += m * ladder.p[i][static_cast<std::size_t>(m + M)];
      worst = std::max(worst, std::abs(mean - jets.cumulant(1, i)));
    }
    return worst;
  }));

  out.push_back(timed_check("heat_consistency", 1e-8, [&] {
    const auto occ = occupancy_trajectory(eq, drive, samples, n0);
    const auto thermo = thermo_observables(occ, drive, eq);
    double worst = 0.0;
    FockState state = start;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const double span[] = {samples[i], samples[i + 1]};
      if (i == 0) {
        const double w = drive(samples[0]);
        const double n = state.mean_occupation().real();
        worst = std::max(worst, std::abs(w * eq.gamma * (bose_einstein(w, eq.T_e) - n) - thermo.J[0]));
      }
      state = evolve_fock(state, drive, eq, complex{}, span).final_state;
      const double w = drive(samples[i + 1]);
      const double n = state.mean_occupation().real();
      worst = std::max(worst, std::abs(w * eq.gamma * (bose_einstein(w, eq.T_e) - n) - thermo.J[i + 1]));
    }
    return worst;
  }));

  return out;
}

}  // namespace qres
