#pragma once

// Harmonic analysis of periodic time series.

#include <complex>
#include <span>

namespace qres {

/// Complex Fourier amplitude A of harmonic h, defined so that a signal
/// Im(A e^{i(h Omega t + phase)}) returns A exactly. `times` must cover exactly
/// one period uniformly, endpoint included; the endpoint is dropped.
std::complex<double> harmonic_phasor(std::span<const double> times, std::span<const double> values,
                                     double Omega, int harmonic = 1, double phase = 0.0);

/// |a - b| / |b|
double relative_phasor_error(std::complex<double> a, std::complex<double> b);

/// Wrapped difference arg(a) - arg(b) in (-pi, pi].
double phase_difference(std::complex<double> a, std::complex<double> b);

}  // namespace qres
