#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phasesync/analytic.hpp"
#include "phasesync/core_data.hpp"
#include "phasesync/sync.hpp"

namespace phasesync {

struct PipelineConfig {
    FilterBand band{4, 18};
    int window = 13;
    std::vector<double> thresholds{0.7, 0.8};
    bool detrend = true;
    bool trim = true;
    double amplitude_floor = kDefaultAmplitudeFloor;
    /// Worker threads for the pair stage; 0 means hardware concurrency.
    unsigned workers = 1;

    /// Throws ContractError if the config cannot be applied to series of
    /// length n (bad band, even W, unsorted or out-of-range thresholds, window
    /// longer than the trimmed phases).
    void validate(std::size_t n) const;

    /// Monthly U.S.-style setup: 28-126 month band on 505 months, W = 13.
    static PipelineConfig us_preset();
    /// Monthly Japan-style setup: 35-81 month band on 488 months, W = 17.
    static PipelineConfig japan_preset();
};

/// Synchronization of one unordered pair. Ids are ordered so id_i < id_j and
/// the underlying phase difference is phi(id_i) - phi(id_j).
struct PairSync {
    std::string id_i;
    std::string id_j;
    SyncSeries sync;
};

/// R_t = share of pairs with gamma2_t >= threshold.
struct RatioSeries {
    double threshold = 0.0;
    std::vector<double> values;
};

struct ResultMeta {
    PipelineConfig config;
    std::size_t length = 0;   // N of the input panel
    std::size_t members = 0;
    YearMonth start;          // calendar month of input index 0
    std::size_t trim_offset = 0;
    std::size_t first_index = 0;  // 0-based input index of gamma2[0] and R[0]
    BandPeriods periods;
};

struct SyncResult {
    std::vector<PairSync> pairs;  // lexicographic by (id_i, id_j)
    std::vector<RatioSeries> ratios;
    ResultMeta meta;

    /// Number of time points in every pair and ratio series.
    [[nodiscard]] std::size_t points() const noexcept {
        return pairs.empty() ? 0 : pairs.front().sync.size();
    }
    /// 1-based position of output point j in the input series.
    [[nodiscard]] std::size_t time_index(std::size_t j) const noexcept { return meta.first_index + j + 1; }
    [[nodiscard]] YearMonth date_at(std::size_t j) const noexcept {
        return meta.start + static_cast<long>(meta.first_index + j);
    }
    /// Looks up a pair in either order; nullptr when absent.
    [[nodiscard]] const PairSync* find_pair(std::string_view a, std::string_view b) const;
    [[nodiscard]] const RatioSeries* find_ratio(double threshold) const;
};

/// Per-series phase extraction: optional detrend, band-pass, analytic signal,
/// optional edge trim. Returns the phases and the trim offset applied.
struct SeriesPhase {
    std::vector<double> phase;
    std::size_t offset = 0;
};
[[nodiscard]] SeriesPhase extract_phase(std::span<const double> values, const PipelineConfig& config);

/// filter -> analytic signal -> all-pairs gamma2_t -> R(gamma2_t >= r).
/// Errors from the per-series and per-pair stages are rethrown with the
/// offending series or pair named.
[[nodiscard]] SyncResult run_pipeline(const Panel& panel, const PipelineConfig& config);

[[nodiscard]] std::vector<double> ratio_above(std::span<const SyncSeries> pair_gamma, double threshold);
[[nodiscard]] std::vector<double> ratio_above(std::span<const PairSync> pairs, double threshold);

/// (x - 50) / 50 for diffusion-index values in [0, 100].
[[nodiscard]] std::vector<double> normalize_di(std::span<const double> series);

enum class Regime { expansion, contraction };
[[nodiscard]] const char* to_string(Regime regime) noexcept;

struct RegimeMean {
    Regime regime;
    double threshold;
    std::size_t months;
    std::optional<double> mean;  // empty when the regime has no months
};

struct AnnotatedTable {
    std::vector<Regime> regimes;  // one per result time point
    std::vector<RegimeMean> summary;

    [[nodiscard]] std::optional<double> mean(Regime regime, double threshold) const;
};

/// Labels each result time point with its regime under `calendar` and averages
/// each R series per regime. The calendar's span must overlap the result's.
[[nodiscard]] AnnotatedTable annotate_recessions(const SyncResult& result, const RecessionCalendar& calendar);

// ─── Sweeps ─────────────────────────────────────────────────────────────────

/// Pearson correlation; NaN when either input has zero variance.
[[nodiscard]] double pearson(std::span<const double> a, std::span<const double> b);

struct RatioComparison {
    double correlation = 0.0;
    std::size_t points = 0;  // months in the common support
};

/// Correlates the R series for `threshold` of two runs over the calendar
/// months both cover. Throws ContractError if either run lacks the threshold
/// or the supports do not intersect.
[[nodiscard]] RatioComparison compare_ratios(const SyncResult& a, const SyncResult& b, double threshold);

// ─── Output ─────────────────────────────────────────────────────────────────

/// `t,date,pair_i,pair_j,gamma2`, grouped by pair.
void write_gamma_csv(std::ostream& out, const SyncResult& result);
/// `t,date,r,R`, one row per time point and threshold.
void write_ratio_long_csv(std::ostream& out, const SyncResult& result);
/// `t,date,R_<r1>,R_<r2>,...[,regime]`.
void write_ratio_wide_csv(std::ostream& out, const SyncResult& result, const AnnotatedTable* regimes = nullptr);
/// `regime,r,mean_R,months`.
void write_regime_summary_csv(std::ostream& out, const AnnotatedTable& table);

using MetaEntries = std::vector<std::pair<std::string, std::string>>;
/// Key-value description of the run; no timestamps.
[[nodiscard]] MetaEntries describe(const SyncResult& result);
/// Writes `key=value` lines.
void write_metadata(std::ostream& out, const MetaEntries& entries);

/// 64-bit FNV-1a digest as 16 hex digits.
[[nodiscard]] std::string fnv1a64_hex(std::string_view bytes);

}  // namespace phasesync
