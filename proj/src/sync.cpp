#include "phasesync/sync.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "phasesync/errors.hpp"

namespace phasesync {

namespace {

double resultant_squared(double sum_cos, double sum_sin, double count) {
    const double c = sum_cos / count;
    const double s = sum_sin / count;
    return std::clamp(c * c + s * s, 0.0, 1.0);
}

// Sliding sums are rebuilt from scratch at this interval so that rounding
// drift stays far below 1e-12 on long sequences.
constexpr std::size_t kResumInterval = 1024;

}  // namespace

PhaseDifferenceSeries phase_difference(std::span<const double> phi1, std::span<const double> phi2) {
    if (phi1.size() != phi2.size()) {
        throw ContractError("phase_difference: length mismatch (" + std::to_string(phi1.size()) +
                            " vs " + std::to_string(phi2.size()) + ")");
    }
    PhaseDifferenceSeries out;
    out.psi.resize(phi1.size());
    std::transform(phi1.begin(), phi1.end(), phi2.begin(), out.psi.begin(), std::minus<>{});
    return out;
}

double sync_index_full(std::span<const double> psi) {
    if (psi.empty()) throw ContractError("sync_index_full: empty phase difference");
    double sc = 0.0;
    double ss = 0.0;
    for (double v : psi) {
        sc += std::cos(v);
        ss += std::sin(v);
    }
    return resultant_squared(sc, ss, static_cast<double>(psi.size()));
}

SyncSeries sync_index_windowed(std::span<const double> psi, int window) {
    if (window < 3 || window % 2 == 0) {
        throw ContractError("window must be odd and >= 3, got " + std::to_string(window));
    }
    const auto n = psi.size();
    const auto w = static_cast<std::size_t>(window);
    if (w > n) {
        throw ContractError("window " + std::to_string(window) + " exceeds sequence length " +
                            std::to_string(n));
    }

    std::vector<double> cosines(n);
    std::vector<double> sines(n);
    for (std::size_t i = 0; i < n; ++i) {
        cosines[i] = std::cos(psi[i]);
        sines[i] = std::sin(psi[i]);
    }

    SyncSeries out;
    out.window = window;
    out.offset = w / 2;
    out.gamma2.resize(n - w + 1);

    const double count = static_cast<double>(w);
    double sc = 0.0;
    double ss = 0.0;
    for (std::size_t j = 0; j < out.gamma2.size(); ++j) {
        if (j % kResumInterval == 0) {
            sc = 0.0;
            ss = 0.0;
            for (std::size_t i = j; i < j + w; ++i) {
                sc += cosines[i];
                ss += sines[i];
            }
        } else {
            sc += cosines[j + w - 1] - cosines[j - 1];
            ss += sines[j + w - 1] - sines[j - 1];
        }
        out.gamma2[j] = resultant_squared(sc, ss, count);
    }
    return out;
}

}  // namespace phasesync
