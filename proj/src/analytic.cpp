#include "phasesync/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasesync/errors.hpp"
#include "real_fft.hpp"

namespace phasesync {

std::vector<double> hilbert(std::span<const double> series) {
    const auto n = series.size();
    if (n < 2) throw ContractError("hilbert: need at least 2 samples");

    auto spectrum = detail::forward_real(series);
    spectrum.front() = 0.0;
    if (n % 2 == 0) spectrum.back() = 0.0;
    // -pi/2 on every positive frequency: multiply by -i.
    for (auto& bin : spectrum) bin = {bin.imag(), -bin.real()};
    return detail::inverse_real(spectrum, n);
}

double phase_angle(double s, double s_h) noexcept {
    const double angle = std::atan2(s_h, s);
    return angle >= std::numbers::pi ? angle - 2.0 * std::numbers::pi : angle;
}

AnalyticSeries analytic_signal(std::span<const double> series, double amplitude_floor) {
    AnalyticSeries out;
    out.s.assign(series.begin(), series.end());
    out.s_h = hilbert(series);

    const auto n = series.size();
    out.amplitude.resize(n);
    out.phase.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.amplitude[t] = std::hypot(out.s[t], out.s_h[t]);
        out.phase[t] = phase_angle(out.s[t], out.s_h[t]);
    }

    const double peak = *std::max_element(out.amplitude.begin(), out.amplitude.end());
    const double floor = amplitude_floor * peak;
    for (std::size_t t = 0; t < n; ++t) {
        if (!(out.amplitude[t] > 0.0) || out.amplitude[t] < floor) {
            throw DegeneratePhaseError("analytic signal amplitude at t=" + std::to_string(t) +
                                           " is below the floor; phase is undefined",
                                       t);
        }
    }
    return out;
}

}  // namespace phasesync
