#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phasesync/core_data.hpp"

namespace phasesync {

/// amplitude * sin(2 pi n / period + phase_offset), n = 0..n-1.
[[nodiscard]] TimeSeries gen_sine(std::size_t n, double period, double amplitude, double phase_offset,
                                  std::string id = "s1", YearMonth start = YearMonth(2000, 1));

enum class Coupling { coupled, uncoupled };

struct Segment {
    std::size_t length = 0;
    Coupling coupling = Coupling::coupled;
};

/// Ground-truth panel of phase oscillators x_i(t) = cos(theta_i(t)) + noise.
///
/// Each member carries a frequency state v_i in [-1, 1]. A coupled step is
/// 2 pi / base_period for every member, so phase differences are frozen. An
/// uncoupled step is 2 pi (1/base_period + jitter v_i(t)). After every step
/// v_i moves by 2 wander (2u - 1) and is reflected back into [-1, 1]; its
/// stationary law is uniform, and wander = 1 makes successive states
/// independent.
///
/// Random numbers come from std::mt19937_64 seeded with `seed`; a uniform
/// deviate is (draw >> 11) * 2^-53 and a normal deviate is Box-Muller
/// sqrt(-2 ln(1 - u1)) cos(2 pi u2) from two consecutive uniforms. Draw order:
///   1. one uniform per member for the initial phase, theta_i(0) = 2 pi u - pi;
///   2. one uniform per member for the initial state, v_i(0) = 2u - 1;
///   3. for each month t, one normal per member for the observation noise
///      (drawn even when noise_sd is 0); then, unless t is the last month,
///      the step to t+1 followed by one uniform per member for the v update.
struct RegimeSpec {
    std::vector<Segment> segments;
    double base_period = 30.0;  // months
    double jitter = 0.03;       // cycles per month
    double wander = 0.05;
    double noise_sd = 0.05;
    std::uint64_t seed = 1;
    YearMonth start = YearMonth(2000, 1);

    [[nodiscard]] std::size_t total_length() const noexcept;
    /// Throws ContractError on empty/zero-length segments, base_period < 2,
    /// negative jitter or noise, wander outside [0, 1], or fewer than 2 months in total.
    void validate() const;
    /// Additionally requires total length >= 2 * window + 2 * trim margin.
    void validate_for(int window, std::size_t trim_margin) const;

    /// Parses `coupled:120,uncoupled:120,...`.
    static std::vector<Segment> parse_segments(std::string_view text);
};

struct LatentPanel {
    Panel panel;
    std::vector<std::vector<double>> phases;  // unwrapped theta_i(t), one row per member
};

[[nodiscard]] LatentPanel gen_regime_latent(std::size_t members, const RegimeSpec& spec);
[[nodiscard]] Panel gen_regime_panel(std::size_t members, const RegimeSpec& spec);

/// Calendar whose "contractions" are the coupled stretches of `spec`, for
/// scoring synthetic runs with annotate_recessions.
[[nodiscard]] RecessionCalendar regime_calendar(const RegimeSpec& spec);

/// Member ids used by the generator: r01, r02, ...
[[nodiscard]] std::string member_id(std::size_t index, std::size_t members);

}  // namespace phasesync
