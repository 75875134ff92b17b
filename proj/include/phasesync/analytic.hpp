#pragma once

#include <span>
#include <vector>

namespace phasesync {

/// Analytic signal s + i s^H sampled at each t, with its polar form.
struct AnalyticSeries {
    std::vector<double> s;
    std::vector<double> s_h;
    std::vector<double> amplitude;  // sqrt(s^2 + s_h^2)
    std::vector<double> phase;      // in [-pi, pi)

    [[nodiscard]] std::size_t size() const noexcept { return s.size(); }
};

/// Discrete Hilbert transform of the periodic extension: every Fourier mode is
/// shifted by -pi/2, so a cos(theta) + b sin(theta) becomes
/// a sin(theta) - b cos(theta). The mean and, for even N, the Nyquist mode map
/// to zero.
[[nodiscard]] std::vector<double> hilbert(std::span<const double> series);

/// Four-quadrant angle of (s, s_h), folded into [-pi, pi).
[[nodiscard]] double phase_angle(double s, double s_h) noexcept;

/// Default relative amplitude floor: points with A_t < floor * max(A) fail.
inline constexpr double kDefaultAmplitudeFloor = 1e-12;

/// Builds the analytic signal of `series`. Throws DegeneratePhaseError naming
/// the first t whose amplitude falls below `amplitude_floor * max_t A_t`.
[[nodiscard]] AnalyticSeries analytic_signal(std::span<const double> series,
                                             double amplitude_floor = kDefaultAmplitudeFloor);

}  // namespace phasesync
