#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phasesync {

/// psi_i = phi1_i - phi2_i, left unwrapped: every consumer goes through cos
/// and sin.
struct PhaseDifferenceSeries {
    std::vector<double> psi;

    [[nodiscard]] std::size_t size() const noexcept { return psi.size(); }
};

/// Windowed synchronization index. gamma2[j] is centred on input index
/// `offset + j` (0-based), where offset = p = (W-1)/2. In the 1-based indexing
/// of the source sequence the valid range is [p+1, N-p].
struct SyncSeries {
    std::vector<double> gamma2;
    int window = 0;
    std::size_t offset = 0;

    [[nodiscard]] std::size_t size() const noexcept { return gamma2.size(); }
    [[nodiscard]] std::size_t first_valid() const noexcept { return offset + 1; }
    [[nodiscard]] std::size_t last_valid() const noexcept { return offset + gamma2.size(); }
};

[[nodiscard]] PhaseDifferenceSeries phase_difference(std::span<const double> phi1,
                                                     std::span<const double> phi2);

/// Squared length of the mean unit phasor of psi over the whole sequence.
[[nodiscard]] double sync_index_full(std::span<const double> psi);
[[nodiscard]] inline double sync_index_full(const PhaseDifferenceSeries& psi) {
    return sync_index_full(psi.psi);
}

/// Centred moving-window index for odd W, 3 <= W <= N. Sliding sums of cos and
/// sin make this O(N); output has N - W + 1 values, each clamped to [0, 1].
[[nodiscard]] SyncSeries sync_index_windowed(std::span<const double> psi, int window);
[[nodiscard]] inline SyncSeries sync_index_windowed(const PhaseDifferenceSeries& psi, int window) {
    return sync_index_windowed(psi.psi, window);
}

}  // namespace phasesync
