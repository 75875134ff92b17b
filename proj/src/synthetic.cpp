#include "phasesync/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

namespace phasesync {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Deviates {
public:
    explicit Deviates(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(kTwoPi * u2);
    }

private:
    std::mt19937_64 engine_;
};

// Reflects x into [-1, 1] (triangle-wave fold with period 4).
double fold_unit(double x) {
    double y = std::fmod(x + 1.0, 4.0);
    if (y < 0.0) y += 4.0;
    y -= 1.0;
    return y > 1.0 ? 2.0 - y : y;
}

}  // namespace

TimeSeries gen_sine(std::size_t n, double period, double amplitude, double phase_offset, std::string id,
                    YearMonth start) {
    if (n < 2) throw ContractError("gen_sine: n must be >= 2");
    if (!(period >= 2.0)) throw ContractError("gen_sine: period must be >= 2");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = amplitude * std::sin(kTwoPi * static_cast<double>(i) / period + phase_offset);
    }
    return TimeSeries(std::move(id), start, std::move(values));
}

std::size_t RegimeSpec::total_length() const noexcept {
    std::size_t total = 0;
    for (const auto& s : segments) total += s.length;
    return total;
}

void RegimeSpec::validate() const {
    if (segments.empty()) throw ContractError("regime spec needs at least one segment");
    for (const auto& s : segments) {
        if (s.length == 0) throw ContractError("regime segments must have positive length");
    }
    if (total_length() < 2) throw ContractError("regime spec must cover at least 2 months");
    if (!(base_period >= 2.0)) throw ContractError("base period must be >= 2 months");
    if (!(jitter >= 0.0)) throw ContractError("jitter must be non-negative");
    if (!(noise_sd >= 0.0)) throw ContractError("noise_sd must be non-negative");
    if (!(wander >= 0.0 && wander <= 1.0)) throw ContractError("wander must be in [0, 1]");
}

void RegimeSpec::validate_for(int window, std::size_t trim_margin) const {
    validate();
    const auto needed = 2 * static_cast<std::size_t>(window) + 2 * trim_margin;
    if (total_length() < needed) {
        throw ContractError("regime spec covers " + std::to_string(total_length()) + " months; need >= " +
                            std::to_string(needed) + " for W=" + std::to_string(window) + " and trim margin " +
                            std::to_string(trim_margin));
    }
}

std::vector<Segment> RegimeSpec::parse_segments(std::string_view text) {
    std::vector<Segment> segments;
    if (text.empty()) throw ContractError("no segments given");
    for (bool more = true; more;) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        more = comma != std::string_view::npos;
        text = more ? text.substr(comma + 1) : std::string_view{};

        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ContractError("segment '" + std::string(item) + "' must look like coupled:<months>");
        }
        const auto kind = item.substr(0, colon);
        const auto count = item.substr(colon + 1);
        Segment seg;
        if (kind == "coupled") {
            seg.coupling = Coupling::coupled;
        } else if (kind == "uncoupled") {
            seg.coupling = Coupling::uncoupled;
        } else {
            throw ContractError("unknown segment kind '" + std::string(kind) + "'");
        }
        auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), seg.length);
        if (ec != std::errc{} || ptr != count.data() + count.size() || seg.length == 0) {
            throw ContractError("segment length '" + std::string(count) + "' is not a positive integer");
        }
        segments.push_back(seg);
    }
    return segments;
}

std::string member_id(std::size_t index, std::size_t members) {
    const auto width = std::to_string(members).size();
    auto digits = std::to_string(index + 1);
    return "r" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

LatentPanel gen_regime_latent(std::size_t members, const RegimeSpec& spec) {
    if (members < 2) throw ContractError("regime panel needs at least 2 members");
    spec.validate();
    const auto n = spec.total_length();

    std::vector<Coupling> coupling;
    coupling.reserve(n);
    for (const auto& s : spec.segments) coupling.insert(coupling.end(), s.length, s.coupling);

    Deviates rng(spec.seed);
    std::vector<double> theta(members);
    for (auto& th : theta) th = kTwoPi * rng.uniform() - std::numbers::pi;
    std::vector<double> drift(members);
    for (auto& v : drift) v = 2.0 * rng.uniform() - 1.0;

    std::vector<std::vector<double>> values(members, std::vector<double>(n));
    std::vector<std::vector<double>> phases(members, std::vector<double>(n));
    const double base_step = kTwoPi / spec.base_period;
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < members; ++i) {
            phases[i][t] = theta[i];
            values[i][t] = std::cos(theta[i]) + spec.noise_sd * rng.normal();
        }
        if (t + 1 == n) break;
        for (std::size_t i = 0; i < members; ++i) {
            theta[i] += coupling[t] == Coupling::coupled ? base_step
                                                         : base_step + kTwoPi * spec.jitter * drift[i];
        }
        for (auto& v : drift) v = fold_unit(v + 2.0 * spec.wander * (2.0 * rng.uniform() - 1.0));
    }

    std::vector<TimeSeries> series;
    series.reserve(members);
    for (std::size_t i = 0; i < members; ++i) {
        series.emplace_back(member_id(i, members), spec.start, std::move(values[i]));
    }
    return {Panel(std::move(series)), std::move(phases)};
}

Panel gen_regime_panel(std::size_t members, const RegimeSpec& spec) {
    return gen_regime_latent(members, spec).panel;
}

RecessionCalendar regime_calendar(const RegimeSpec& spec) {
    spec.validate();
    std::vector<RecessionEpisode> episodes;
    std::size_t position = 0;
    for (const auto& s : spec.segments) {
        const auto first = spec.start + static_cast<long>(position);
        const auto last = first + static_cast<long>(s.length - 1);
        if (s.coupling == Coupling::coupled) {
            if (!episodes.empty() && episodes.back().trough == first - 1) {
                episodes.back().trough = last;
            } else {
                episodes.push_back({first - 1, last});
            }
        }
        position += s.length;
    }
    return RecessionCalendar(std::move(episodes));
}

}  // namespace phasesync
