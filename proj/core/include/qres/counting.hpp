#pragma once

// Full counting statistics of the net number m of photons emitted into the
// reservoir.
//
// For a counting field s the tilted state stays Gaussian, so the whole
// generating function reduces to two scalars: the cumulant generating
// function C(s, t) and an s-dependent occupation n(s, t), with
//
//   dC/dt = g (e^s - 1) n (1 + n_B) + g (e^-s - 1) n_B (1 + n)
//   dn/dt = g (e^s - 1) n^2 (1 + n_B) + g (e^-s - 1) n_B (1 + n)^2 + g (n_B - n)
//
// where n_B = n_B(omega_0(t)). Counting starts with C = 0 and n(s) equal to
// the physical occupation. Cumulants come from propagating both functions as
// truncated power series in s; the distribution comes from s = i theta on a
// uniform theta grid and a discrete Fourier transform.

#include <complex>
#include <span>
#include <vector>

#include "qres/integrator.hpp"
#include "qres/model.hpp"
#include "qres/series.hpp"

namespace qres {

using complex = std::complex<double>;

struct CountingOptions {
  StepperOptions stepper{};
  double overflow_bound = 700.0;  // largest Re C before e^C is unrepresentable
  int jet_capacity = 8;           // largest cumulant order cumulant_trajectories accepts
  unsigned threads = 0;           // theta-grid workers; 0 = hardware concurrency
};

struct CountingState {
  double t = 0.0;
  complex s;
  complex C;
  complex n_s;

  complex M() const { return std::exp(C); }
};

/// Integrates the (C, n(s)) pair on `times`, starting at times.front() with
/// C = 0 and n(s) = n_init. Throws Error{overflow} if Re C exceeds the bound.
std::vector<CountingState> evolve_counting(complex s, const SystemParams& params,
                                           const DriveWaveform& drive, std::span<const double> times,
                                           complex n_init, const CountingOptions& options = {});

std::vector<CountingState> evolve_counting(complex s, const SystemParams& params,
                                           const DriveWaveform& drive, const SimulationGrid& grid,
                                           complex n_init, CountingOptions options = {});

/// Time derivatives of the C and n(s) series for a given n_B. Exposed so the
/// hand-derived low-order hierarchy can be checked against it.
void jet_derivatives(const Series& C, const Series& n, double n_B, double gamma, Series& dC,
                     Series& dn);

struct CumulantJet {
  double t = 0.0;
  Series C;  // Taylor coefficients of C(s, t)
  Series n;  // Taylor coefficients of n(s, t)

  /// k-th cumulant, k! C_k.
  double cumulant(int k) const { return C.derivative(k); }
  /// k! n_k; n_0 is the physical occupation.
  double occupation_coefficient(int k) const { return n.derivative(k); }
};

struct CumulantTrajectories {
  int order = 0;
  double n_start = 0.0;  // physical occupation when counting started
  std::vector<double> times;
  std::vector<CumulantJet> jets;

  /// Cumulant of order k at sample i.
  double cumulant(int k, std::size_t i) const { return jets[i].cumulant(k); }
  std::vector<double> cumulant_series(int k) const;
};

/// Propagates order-K jets on `times` from counting start times.front().
CumulantTrajectories propagate_jets(int order, const SystemParams& params, const DriveWaveform& drive,
                                    std::span<const double> times, double n_init,
                                    const CountingOptions& options = {});

/// First K cumulants on the grid's sample times, counting from grid.t_start
/// where the resonator is in its certified periodic state.
CumulantTrajectories cumulant_trajectories(int order, const SystemParams& params,
                                           const DriveWaveform& drive, const SimulationGrid& grid,
                                           CountingOptions options = {});

struct PhotonDistribution {
  double t = 0.0;
  int m_max = 0;
  std::vector<double> p;  // p[m + m_max] for m in [-m_max, m_max]
  int n_theta = 0;
  double max_imaginary = 0.0;   // largest |Im p(m)| before it was discarded
  double min_raw = 0.0;         // most negative real part before clipping
  double clip_correction = 0.0;  // probability mass removed by clipping
  bool aliasing_warning = false;

  double probability(int m) const;
  double total() const;
};

/// Smallest power of two >= 4 (2 m_max + 1).
int theta_grid_size(int m_max);
/// theta_j = -pi + 2 pi (j + 1) / n, j = 0..n-1, covering (-pi, pi].
std::vector<double> theta_grid(int n);

/// p(m) = (1/N) sum_j e^{-i m theta_j} M(i theta_j), followed by the
/// negative-probability and aliasing checks. `M` is sampled on theta_grid(N).
PhotonDistribution invert_generating_function(std::span<const complex> M, int m_max, double t);

/// Distribution of transfers counted from t0 (occupation n_init) to t.
PhotonDistribution distribution_between(double t0, double t, double n_init, int m_max,
                                        const SystemParams& params, const DriveWaveform& drive,
                                        const CountingOptions& options = {});

/// Distribution at time t, counting from grid.t_start in the periodic state.
PhotonDistribution distribution(double t, int m_max, const SystemParams& params,
                                const DriveWaveform& drive, const SimulationGrid& grid,
                                CountingOptions options = {});

/// e^{-|m| x} tanh(x/2): the long-time undriven distribution.
double equilibrium_distribution(double x, int m);

struct DistributionMoments {
  double total = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
  double fourth_cumulant = 0.0;  // mu_4 - 3 mu_2^2
};

DistributionMoments moments(const PhotonDistribution& dist);

}  // namespace qres
