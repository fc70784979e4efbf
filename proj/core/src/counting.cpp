#include "qres/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "qres/dynamics.hpp"
#include "qres/errors.hpp"
#include "qres/parallel.hpp"

namespace qres {

namespace {

constexpr double kNegativeTolerance = 1e-10;
constexpr double kRenormalizeLimit = 1e-8;
constexpr double kAliasThreshold = 1e-6;

void check_times(std::span<const double> times) {
  if (times.empty()) throw Error(ErrorKind::grid_mismatch, "counting needs at least one time");
}

// e^s - 1 without cancellation for small |s|.
complex expm1(complex s) {
  const double a = s.real();
  const double b = s.imag();
  const double half = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * half * half, std::exp(a) * std::sin(b)};
}

}  // namespace

std::vector<CountingState> evolve_counting(complex s, const SystemParams& params,
                                           const DriveWaveform& drive, std::span<const double> times,
                                           complex n_init, const CountingOptions& options) {
  validate(params);
  check_times(times);
  const double gamma = params.gamma;
  const double T_e = params.T_e;
  const complex ep = expm1(s);
  const complex em = expm1(-s);
  const double bound = options.overflow_bound;

  auto rhs = [&](const Piece& piece, double t, const Eigen::Vector2cd& y, Eigen::Vector2cd& dy) {
    if (y[0].real() > bound) {
      throw Error(ErrorKind::overflow, "Re C(s,t) exceeded " + std::to_string(bound));
    }
    const double nb = bose_einstein(drive.on_piece(t, piece.mid()), T_e);
    const complex n = y[1];
    const complex up = gamma * ep * (1.0 + nb);
    const complex down = gamma * em * nb;
    dy[0] = up * n + down * (1.0 + n);
    dy[1] = up * n * n + down * (1.0 + n) * (1.0 + n) + gamma * (nb - n);
  };

  std::vector<CountingState> out(times.size());
  Eigen::Vector2cd y(complex{0.0, 0.0}, n_init);
  auto observe = [&](std::size_t i, double t, const Eigen::Vector2cd& state) {
    if (state[0].real() > bound) {
      throw Error(ErrorKind::overflow, "Re C(s,t) exceeded " + std::to_string(bound));
    }
    out[i] = {t, s, state[0], state[1]};
  };
  integrate(rhs, y, times.front(), times, drive.breakpoints(times.front(), times.back()),
            options.stepper, observe);
  return out;
}

std::vector<CountingState> evolve_counting(complex s, const SystemParams& params,
                                           const DriveWaveform& drive, const SimulationGrid& grid,
                                           complex n_init, CountingOptions options) {
  options.stepper.dt_max = std::min(options.stepper.dt_max, grid.dt_max);
  const auto times = grid.sample_times();
  return evolve_counting(s, params, drive, std::span<const double>(times), n_init, options);
}

void jet_derivatives(const Series& C, const Series& n, double n_B, double gamma, Series& dC,
                     Series& dn) {
  const int K = C.order();
  const Series ep = Series::exp_minus_one(K, +1);
  const Series em = Series::exp_minus_one(K, -1);
  const Series one_plus_n = n + 1.0;
  dC = ep * n * (gamma * (1.0 + n_B)) + em * one_plus_n * (gamma * n_B);
  dn = ep * (n * n) * (gamma * (1.0 + n_B)) + em * (one_plus_n * one_plus_n) * (gamma * n_B) +
       (Series::constant(K, n_B) - n) * gamma;
}

std::vector<double> CumulantTrajectories::cumulant_series(int k) const {
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& jet : jets) out.push_back(jet.cumulant(k));
  return out;
}

CumulantTrajectories propagate_jets(int order, const SystemParams& params, const DriveWaveform& drive,
                                    std::span<const double> times, double n_init,
                                    const CountingOptions& options) {
  validate(params);
  check_times(times);
  if (order < 1) throw Error(ErrorKind::domain, "cumulant order must be >= 1");
  if (order > options.jet_capacity || order > Series::kMaxOrder) {
    throw Error(ErrorKind::order_overflow, "cumulant order " + std::to_string(order) +
                                               " exceeds jet capacity " +
                                               std::to_string(options.jet_capacity));
  }
  const int width = order + 1;
  const double gamma = params.gamma;
  const double T_e = params.T_e;

  auto unpack = [&](const Eigen::VectorXd& y, Series& C, Series& n) {
    C = Series::from_coefficients(std::span<const double>(y.data(), static_cast<std::size_t>(width)));
    n = Series::from_coefficients(
        std::span<const double>(y.data() + width, static_cast<std::size_t>(width)));
  };

  auto rhs = [&](const Piece& piece, double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    Series C, n, dC, dn;
    unpack(y, C, n);
    const double nb = bose_einstein(drive.on_piece(t, piece.mid()), T_e);
    jet_derivatives(C, n, nb, gamma, dC, dn);
    for (int k = 0; k < width; ++k) {
      dy[k] = dC[k];
      dy[width + k] = dn[k];
    }
  };

  CumulantTrajectories out;
  out.order = order;
  out.n_start = n_init;
  out.times.assign(times.begin(), times.end());
  out.jets.resize(times.size());

  Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * width);
  y[width] = n_init;
  auto observe = [&](std::size_t i, double t, const Eigen::VectorXd& state) {
    out.jets[i].t = t;
    unpack(state, out.jets[i].C, out.jets[i].n);
  };
  integrate(rhs, y, times.front(), times, drive.breakpoints(times.front(), times.back()),
            options.stepper, observe);
  return out;
}

CumulantTrajectories cumulant_trajectories(int order, const SystemParams& params,
                                           const DriveWaveform& drive, const SimulationGrid& grid,
                                           CountingOptions options) {
  options.stepper.dt_max = std::min(options.stepper.dt_max, grid.dt_max);
  const double n0 = initial_occupancy(params, drive, grid, options.stepper);
  const auto times = grid.sample_times();
  return propagate_jets(order, params, drive, std::span<const double>(times), n0, options);
}

double PhotonDistribution::probability(int m) const {
  if (m < -m_max || m > m_max) return 0.0;
  return p[static_cast<std::size_t>(m + m_max)];
}

double PhotonDistribution::total() const {
  double sum = 0.0;
  for (double v : p) sum += v;
  return sum;
}

int theta_grid_size(int m_max) {
  if (m_max < 0) throw Error(ErrorKind::window, "m_max must be non-negative");
  const long want = 4L * (2L * m_max + 1L);
  long n = 1;
  while (n < want) n *= 2;
  return static_cast<int>(n);
}

std::vector<double> theta_grid(int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = -std::numbers::pi + 2.0 * std::numbers::pi * (j + 1) / n;
  }
  return out;
}

PhotonDistribution invert_generating_function(std::span<const complex> M, int m_max, double t) {
  const int n = static_cast<int>(M.size());
  if (m_max < 0 || n < 2 * m_max + 1) {
    throw Error(ErrorKind::window, "theta grid too small for the requested m window");
  }
  const auto theta = theta_grid(n);
  PhotonDistribution out;
  out.t = t;
  out.m_max = m_max;
  out.n_theta = n;
  out.p.resize(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    complex acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      acc += std::polar(1.0, -m * theta[static_cast<std::size_t>(j)]) * M[static_cast<std::size_t>(j)];
    }
    acc /= static_cast<double>(n);
    out.max_imaginary = std::max(out.max_imaginary, std::abs(acc.imag()));
    out.min_raw = std::min(out.min_raw, acc.real());
    out.p[static_cast<std::size_t>(m + m_max)] = acc.real();
  }
  if (out.min_raw < -kNegativeTolerance) {
    throw Error(ErrorKind::numerical, "inverted distribution has p(m) = " + std::to_string(out.min_raw) +
                                          " below the quadrature-noise tolerance");
  }
  for (double& v : out.p) {
    if (v < 0.0) {
      out.clip_correction -= v;
      v = 0.0;
    }
  }
  if (out.clip_correction > 0.0 && out.clip_correction < kRenormalizeLimit) {
    const double total = out.total();
    for (double& v : out.p) v /= total;
  }
  out.aliasing_warning = std::abs(out.p.front()) > kAliasThreshold ||
                         std::abs(out.p.back()) > kAliasThreshold ||
                         std::abs(out.total() - 1.0) > kRenormalizeLimit;
  return out;
}

PhotonDistribution distribution_between(double t0, double t, double n_init, int m_max,
                                        const SystemParams& params, const DriveWaveform& drive,
                                        const CountingOptions& options) {
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
          const auto states = evolve_counting(complex{0.0, theta[j]}, params, drive,
                                              std::span<const double>(span), n_init, options);
          M[j] = states.back().M();
        },
        options.threads);
  }
  return invert_generating_function(M, m_max, t);
}

PhotonDistribution distribution(double t, int m_max, const SystemParams& params,
                                const DriveWaveform& drive, const SimulationGrid& grid,
                                CountingOptions options) {
  validate(grid);
  if (t < grid.t_start || t > grid.t_end) {
    throw Error(ErrorKind::domain, "distribution time outside the grid");
  }
  options.stepper.dt_max = std::min(options.stepper.dt_max, grid.dt_max);
  const double n0 = initial_occupancy(params, drive, grid, options.stepper);
  return distribution_between(grid.t_start, t, n0, m_max, params, drive, options);
}

double equilibrium_distribution(double x, int m) {
  if (!(x > 0.0)) throw Error(ErrorKind::domain, "equilibrium_distribution: x must be positive");
  return std::exp(-std::abs(m) * x) * std::tanh(0.5 * x);
}

DistributionMoments moments(const PhotonDistribution& dist) {
  DistributionMoments out;
  for (int m = -dist.m_max; m <= dist.m_max; ++m) {
    const double p = dist.probability(m);
    out.total += p;
    out.mean += m * p;
  }
  out.mean /= out.total;
  double mu2 = 0.0, mu3 = 0.0, mu4 = 0.0;
  for (int m = -dist.m_max; m <= dist.m_max; ++m) {
    const double p = dist.probability(m) / out.total;
    const double d = m - out.mean;
    mu2 += d * d * p;
    mu3 += d * d * d * p;
    mu4 += d * d * d * d * p;
  }
  out.variance = mu2;
  out.third_central = mu3;
  out.fourth_cumulant = mu4 - 3.0 * mu2 * mu2;
  return out;
}

}  // namespace qres
