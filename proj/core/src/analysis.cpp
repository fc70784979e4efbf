#include "qres/analysis.hpp"

#include <cmath>
#include <numbers>

#include "qres/errors.hpp"

namespace qres {

std::complex<double> harmonic_phasor(std::span<const double> times, std::span<const double> values,
                                     double Omega, int harmonic, double phase) {
  if (times.size() != values.size() || times.size() < 3) {
    throw Error(ErrorKind::grid_mismatch, "harmonic_phasor: times and values must match (>= 3 samples)");
  }
  const std::size_t n = times.size() - 1;
  const double period = 2.0 * std::numbers::pi / Omega;
  const double span = times.back() - times.front();
  if (std::abs(span - period) > 1e-9 * period) {
    throw Error(ErrorKind::grid_mismatch, "harmonic_phasor: samples must cover exactly one period");
  }
  std::complex<double> acc{};
  for (std::size_t j = 0; j < n; ++j) {
    acc += values[j] * std::polar(1.0, -(harmonic * Omega * times[j] + phase));
  }
  return std::complex<double>{0.0, 2.0} * acc / static_cast<double>(n);
}

double relative_phasor_error(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

double phase_difference(std::complex<double> a, std::complex<double> b) {
  return std::arg(a / b);
}

}  // namespace qres
