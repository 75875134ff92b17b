#include "phasesync/spectral.hpp"

#include <numeric>

#include "real_fft.hpp"

namespace phasesync {

namespace {

void require_length(std::span<const double> series, const char* what) {
    if (series.size() < 2) {
        throw ContractError(std::string(what) + ": need at least 2 samples, got " +
                            std::to_string(series.size()));
    }
}

bool is_nyquist(std::size_t n, std::size_t k) { return n % 2 == 0 && k == n / 2; }

}  // namespace

FourierCoefficients fourier_analyze(std::span<const double> series) {
    require_length(series, "fourier_analyze");
    const auto n = series.size();
    const auto spectrum = detail::forward_real(series);

    FourierCoefficients c;
    c.n = n;
    c.a.resize(spectrum.size());
    c.b.assign(spectrum.size(), 0.0);
    const double full = 2.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (is_nyquist(n, k)) {
            c.a[k] = spectrum[k].real() / static_cast<double>(n);
            continue;
        }
        c.a[k] = full * spectrum[k].real();
        if (k > 0) c.b[k] = -full * spectrum[k].imag();
    }
    return c;
}

std::vector<double> fourier_synthesize(const FourierCoefficients& coeffs, const FilterBand& band) {
    band.validate(coeffs.n);
    const auto n = coeffs.n;
    const double half = static_cast<double>(n) / 2.0;
    std::vector<std::complex<double>> spectrum(n / 2 + 1);
    for (auto k = static_cast<std::size_t>(band.lower); k <= static_cast<std::size_t>(band.upper); ++k) {
        spectrum[k] = is_nyquist(n, k) ? std::complex<double>(static_cast<double>(n) * coeffs.a[k], 0.0)
                                       : half * std::complex<double>(coeffs.a[k], -coeffs.b[k]);
    }
    return detail::inverse_real(spectrum, n);
}

std::vector<double> bandpass(std::span<const double> series, const FilterBand& band) {
    require_length(series, "bandpass");
    band.validate(series.size());
    return fourier_synthesize(fourier_analyze(series), band);
}

std::vector<double> detrend_linear(std::span<const double> series) {
    require_length(series, "detrend_linear");
    const auto n = series.size();
    const double centre = static_cast<double>(n - 1) / 2.0;
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);

    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) - centre;
        sxy += d * (series[i] - mean);
        sxx += d * d;
    }
    const double slope = sxy / sxx;

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = series[i] - mean - slope * (static_cast<double>(i) - centre);
    }
    return out;
}

std::size_t trim_margin(std::size_t n, const FilterBand& band) {
    band.validate(n);
    return static_cast<std::size_t>(round_half_up(static_cast<double>(n) / band.upper));
}

TrimmedSeries trim_edges(std::span<const double> series, const FilterBand& band) {
    const auto n = series.size();
    const auto m = trim_margin(n, band);
    if (n <= 2 * m) {
        throw ContractError("trim_edges: series of length " + std::to_string(n) +
                            " is too short to drop " + std::to_string(m) + " points from each end");
    }
    return {std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(m),
                                series.end() - static_cast<std::ptrdiff_t>(m)),
            m};
}

}  // namespace phasesync
