#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasesync/core_data.hpp"

namespace phasesync {

/// Real Fourier series coefficients of a length-N sequence:
///
///   x_n = a_0/2 + sum_{k=1}^{floor(N/2)} a_k cos(2 pi k n / N) + b_k sin(2 pi k n / N)
///
/// with a_k = (2/N) sum x_n cos(.), b_k = (2/N) sum x_n sin(.). For even N the
/// Nyquist term k = N/2 is normalized by 1/N instead, so it enters the sum once
/// (b_{N/2} is identically zero). Both vectors have floor(N/2)+1 entries;
/// b[0] is always 0.
struct FourierCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    std::size_t n = 0;

    [[nodiscard]] std::size_t max_frequency() const noexcept { return n / 2; }
};

[[nodiscard]] FourierCoefficients fourier_analyze(std::span<const double> series);

/// Partial Fourier sum over [band.lower, band.upper]; the mean term is never
/// included.
[[nodiscard]] std::vector<double> fourier_synthesize(const FourierCoefficients& coeffs,
                                                     const FilterBand& band);

/// Fourier band-pass: keeps modes k_l..k_u of the periodic extension.
[[nodiscard]] std::vector<double> bandpass(std::span<const double> series, const FilterBand& band);

/// Subtracts the least-squares line fitted against the index 0..N-1.
[[nodiscard]] std::vector<double> detrend_linear(std::span<const double> series);

/// round_half_up(n / band.upper): the period of the band's highest frequency.
[[nodiscard]] std::size_t trim_margin(std::size_t n, const FilterBand& band);

struct TrimmedSeries {
    std::vector<double> values;
    std::size_t offset = 0;  // points dropped from each end
};

/// Drops trim_margin(N, band) points from both ends.
[[nodiscard]] TrimmedSeries trim_edges(std::span<const double> series, const FilterBand& band);

}  // namespace phasesync
