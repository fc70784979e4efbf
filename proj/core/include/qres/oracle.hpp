#pragma once

// Brute-force reference for the counting module: the full density matrix in
// a truncated Fock space {|0>, ..., |N_max>}, evolved under the tilted
// Lindblad generator
//
//   L(s) rho = -i omega [a^dag a, rho]
//              + g (1 + n_B) (e^s a rho a^dag - {a^dag a, rho}/2)
//              + g n_B (e^-s a^dag rho a - {a a^dag, rho}/2)
//
// and, independently, as an m-resolved ladder of density matrices. Matrices
// are vectorized column-major: vec(rho)[i + d j] = rho(i, j), d = N_max + 1.
// Nothing here assumes the state stays thermal, which is what makes it a
// check on the two-scalar reduction used by the counting module.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qres/counting.hpp"
#include "qres/integrator.hpp"
#include "qres/model.hpp"

namespace qres {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using SuperOperator = Eigen::SparseMatrix<complex>;

inline constexpr int kMaxFockTruncation = 80;

struct FockState {
  int n_max = 0;
  ComplexVector rho;  // vec(rho), length (n_max + 1)^2
  complex s;          // counting field the state was evolved with

  int dimension() const { return n_max + 1; }
  complex element(int i, int j) const { return rho[i + dimension() * j]; }
  complex trace() const;
  /// tr(a^dag a rho)
  complex mean_occupation() const;
  ComplexMatrix matrix() const;
};

/// Diagonal state with populations proportional to (n/(1+n))^k, renormalized
/// on the truncated space. Throws Error{truncation} if (n/(1+n))^N_max > 1e-8.
FockState thermal_state(double n_occ, int n_max);

/// Dense-equivalent tilted generator at fixed frequency, stored sparse.
SuperOperator build_tilted_generator(complex s, double omega, const SystemParams& params, int n_max);

/// The generator split into pieces whose weights depend on omega(t):
/// L = omega H + g(1+n_B)(e^s E + De) + g n_B(e^-s A + Da).
struct GeneratorParts {
  int n_max = 0;
  SuperOperator commutator;  // -i [a^dag a, .]
  SuperOperator emission;    // a . a^dag
  SuperOperator absorption;  // a^dag . a
  SuperOperator emission_loss;    // -{a^dag a, .}/2
  SuperOperator absorption_loss;  // -{a a^dag, .}/2
};

GeneratorParts generator_parts(int n_max);

struct FockEvolution {
  std::vector<double> times;
  std::vector<complex> M;  // tr rho(s, t)
  FockState final_state;
  double max_top_population = 0.0;  // max |rho(N_max, N_max)| / max(1, |M|)
};

/// Evolves `initial` under L(s) with omega(t) from `drive` and returns the
/// moment generating function tr rho(s, t) on `times`. Throws
/// Error{truncation} if the top Fock level rises above 1e-8.
FockEvolution evolve_fock(const FockState& initial, const DriveWaveform& drive,
                          const SystemParams& params, complex s, std::span<const double> times,
                          const StepperOptions& options = {});

struct MResolvedState {
  int n_max = 0;
  int m_window = 0;
  std::vector<ComplexVector> rho;  // rho[m + m_window]

  complex trace(int m) const;
  /// sum over m of rho(m)
  ComplexVector marginal() const;
};

struct MResolvedEvolution {
  std::vector<double> times;
  std::vector<std::vector<double>> p;  // p[i][m + m_window] at times[i]
  MResolvedState final_state;
  double max_leakage = 0.0;  // largest boundary trace seen
  double max_norm_error = 0.0;  // largest |sum_m tr rho(m) - 1|
};

/// Evolves the ladder d rho(m)/dt = L0 rho(m) + J_e rho(m-1) + J_a rho(m+1)
/// on m in [-M, M], starting with all weight in rho(0) = initial. Throws
/// Error{leakage} if a boundary trace exceeds 1e-8.
MResolvedEvolution m_resolved_evolve(const FockState& initial, const DriveWaveform& drive,
                                     const SystemParams& params, int m_window,
                                     std::span<const double> times, const StepperOptions& options = {});

/// Distribution from the tilted generator on the theta grid: one Fock
/// evolution per theta, then the same Fourier inversion as the counting module.
PhotonDistribution fock_distribution(const FockState& initial, const DriveWaveform& drive,
                                     const SystemParams& params, double t0, double t, int m_max,
                                     const StepperOptions& options = {}, unsigned threads = 0);

/// (1/2) sum |p - q|. Throws Error{window} if the windows differ.
double total_variation(std::span<const double> p, std::span<const double> q);
double total_variation(const PhotonDistribution& p, const PhotonDistribution& q);

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  double seconds = 0.0;
};

struct OracleSuiteOptions {
  int n_max = 40;
  int m_window = 30;
  unsigned threads = 0;
};

/// Cross-method checks between the oracle and the counting module:
/// generator structure, undriven characteristic function, equilibrium
/// distribution, and the driven distribution via both oracle routes.
std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options = {});

}  // namespace qres
