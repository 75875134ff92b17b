#pragma once

// Thin RAII layer over FFTW's real-to-complex transforms. Internal to the
// library; callers see only FourierCoefficients and real sequences.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace phasesync::detail {

/// X_k = sum_n x_n exp(-2 pi i k n / N) for k = 0..floor(N/2).
std::vector<std::complex<double>> forward_real(std::span<const double> x);

/// Inverse of forward_real including the 1/N factor: returns the length-n real
/// sequence whose half spectrum is `spectrum`.
std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum, std::size_t n);

}  // namespace phasesync::detail
