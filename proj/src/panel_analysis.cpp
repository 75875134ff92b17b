#include "phasesync/panel_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "phasesync/spectral.hpp"

namespace phasesync {

namespace {

std::size_t phase_length(std::size_t n, const PipelineConfig& config) {
    if (!config.trim) return n;
    const auto m = trim_margin(n, config.band);
    return n > 2 * m ? n - 2 * m : 0;
}

unsigned resolve_workers(unsigned requested, std::size_t jobs) {
    unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on up to `workers` threads. Each job writes
// only its own slot, so the merged result does not depend on scheduling. The
// first exception by job index is rethrown.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
    std::vector<std::exception_ptr> errors(count);
    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = resolve_workers(workers, count);
    if (workers <= 1) {
        run_range(0, count);
    } else {
        std::vector<std::jthread> threads;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t begin = 0; begin < count; begin += chunk) {
            threads.emplace_back(run_range, begin, std::min(count, begin + chunk));
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

// ─── PipelineConfig ─────────────────────────────────────────────────────────

void PipelineConfig::validate(std::size_t n) const {
    band.validate(n);
    if (window < 3 || window % 2 == 0) {
        throw ContractError("window must be odd and >= 3, got " + std::to_string(window));
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
            throw ContractError("threshold " + format_number(thresholds[i]) + " is outside [0, 1]");
        }
        if (i > 0 && !(thresholds[i - 1] < thresholds[i])) {
            throw ContractError("thresholds must be strictly increasing");
        }
    }
    if (!(amplitude_floor >= 0.0)) throw ContractError("amplitude floor must be non-negative");
    const auto usable = phase_length(n, *this);
    if (usable < static_cast<std::size_t>(window)) {
        throw ContractError("window " + std::to_string(window) + " exceeds the " + std::to_string(usable) +
                            " points left after trimming a series of length " + std::to_string(n));
    }
}

PipelineConfig PipelineConfig::us_preset() {
    PipelineConfig c;
    c.band = {4, 18};
    c.window = 13;
    return c;
}

PipelineConfig PipelineConfig::japan_preset() {
    PipelineConfig c;
    c.band = {6, 14};
    c.window = 17;
    return c;
}

// ─── SyncResult ─────────────────────────────────────────────────────────────

const PairSync* SyncResult::find_pair(std::string_view a, std::string_view b) const {
    if (b < a) std::swap(a, b);
    const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{a, b},
                                     [](const PairSync& p, const std::pair<std::string_view, std::string_view>& key) {
                                         return std::pair<std::string_view, std::string_view>(p.id_i, p.id_j) < key;
                                     });
    return it != pairs.end() && it->id_i == a && it->id_j == b ? &*it : nullptr;
}

const RatioSeries* SyncResult::find_ratio(double threshold) const {
    for (const auto& r : ratios) {
        if (r.threshold == threshold) return &r;
    }
    return nullptr;
}

// ─── Pipeline ───────────────────────────────────────────────────────────────

SeriesPhase extract_phase(std::span<const double> values, const PipelineConfig& config) {
    std::vector<double> filtered =
        config.detrend ? bandpass(detrend_linear(values), config.band) : bandpass(values, config.band);
    auto analytic = analytic_signal(filtered, config.amplitude_floor);
    if (!config.trim) return {std::move(analytic.phase), 0};
    auto trimmed = trim_edges(analytic.phase, config.band);
    return {std::move(trimmed.values), trimmed.offset};
}

SyncResult run_pipeline(const Panel& panel, const PipelineConfig& config) {
    const auto n = panel.length();
    config.validate(n);
    if (panel.members() < 2) throw ContractError("need >= 2 series, panel has " + std::to_string(panel.members()));

    // Pair orientation and order come from sorted ids, never from column order.
    std::vector<std::size_t> order(panel.members());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return panel[a].id() < panel[b].id(); });

    std::vector<SeriesPhase> phases(panel.members());
    parallel_for(panel.members(), config.workers, [&](std::size_t i) {
        const auto& series = panel[order[i]];
        try {
            phases[i] = extract_phase(series.values(), config);
        } catch (const DegeneratePhaseError& e) {
            throw DegeneratePhaseError("series '" + series.id() + "': " + e.what(), e.index());
        } catch (const ContractError& e) {
            throw ContractError("series '" + series.id() + "': " + e.what());
        }
    });

    const std::size_t m = panel.members();
    std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
    index_pairs.reserve(m * (m - 1) / 2);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) index_pairs.emplace_back(a, b);
    }

    SyncResult result;
    result.pairs.resize(index_pairs.size());
    parallel_for(index_pairs.size(), config.workers, [&](std::size_t k) {
        const auto [a, b] = index_pairs[k];
        auto& out = result.pairs[k];
        out.id_i = panel[order[a]].id();
        out.id_j = panel[order[b]].id();
        try {
            out.sync = sync_index_windowed(phase_difference(phases[a].phase, phases[b].phase), config.window);
        } catch (const ContractError& e) {
            throw ContractError("pair (" + out.id_i + ", " + out.id_j + "): " + e.what());
        }
    });

    for (double r : config.thresholds) {
        result.ratios.push_back({r, ratio_above(result.pairs, r)});
    }

    auto& meta = result.meta;
    meta.config = config;
    meta.length = n;
    meta.members = m;
    meta.start = panel.start();
    meta.trim_offset = phases.front().offset;
    meta.first_index = meta.trim_offset + result.pairs.front().sync.offset;
    meta.periods = periods_of_band(n, config.band);
    return result;
}

// ─── Ratios and DI ──────────────────────────────────────────────────────────

std::vector<double> ratio_above(std::span<const SyncSeries> pair_gamma, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ContractError("threshold " + format_number(threshold) + " is outside [0, 1]");
    }
    if (pair_gamma.empty()) throw ContractError("ratio_above: no pair series");
    const auto& first = pair_gamma.front();
    for (const auto& s : pair_gamma) {
        if (s.size() != first.size() || s.offset != first.offset || s.window != first.window) {
            throw ContractError("ratio_above: pair series are not aligned");
        }
    }
    std::vector<double> ratio(first.size());
    const double pairs = static_cast<double>(pair_gamma.size());
    for (std::size_t t = 0; t < ratio.size(); ++t) {
        std::size_t hits = 0;
        for (const auto& s : pair_gamma) hits += s.gamma2[t] >= threshold ? 1 : 0;
        ratio[t] = static_cast<double>(hits) / pairs;
    }
    return ratio;
}

std::vector<double> ratio_above(std::span<const PairSync> pairs, double threshold) {
    std::vector<SyncSeries> series;
    series.reserve(pairs.size());
    for (const auto& p : pairs) series.push_back(p.sync);
    return ratio_above(std::span<const SyncSeries>(series), threshold);
}

std::vector<double> normalize_di(std::span<const double> series) {
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = series[i];
        if (!(x >= 0.0 && x <= 100.0)) {
            throw ContractError("diffusion index value " + format_number(x) + " at index " + std::to_string(i) +
                                " is outside [0, 100]");
        }
        out[i] = (x - 50.0) / 50.0;
    }
    return out;
}

// ─── Sweeps ─────────────────────────────────────────────────────────────────

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw ContractError("pearson: need two non-empty series of equal length");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::nan("");
    return sab / std::sqrt(saa * sbb);
}

RatioComparison compare_ratios(const SyncResult& a, const SyncResult& b, double threshold) {
    const auto* ra = a.find_ratio(threshold);
    const auto* rb = b.find_ratio(threshold);
    if (ra == nullptr || rb == nullptr) {
        throw ContractError("compare_ratios: threshold " + format_number(threshold) + " missing from a run");
    }
    if (a.points() == 0 || b.points() == 0) throw ContractError("compare_ratios: empty run");
    const auto first = std::max(a.date_at(0), b.date_at(0));
    const auto last = std::min(a.date_at(a.points() - 1), b.date_at(b.points() - 1));
    if (last < first) throw ContractError("compare_ratios: runs share no calendar months");

    const auto count = static_cast<std::size_t>(last - first + 1);
    const auto skip_a = static_cast<std::size_t>(first - a.date_at(0));
    const auto skip_b = static_cast<std::size_t>(first - b.date_at(0));
    const std::span<const double> xa(ra->values.data() + skip_a, count);
    const std::span<const double> xb(rb->values.data() + skip_b, count);
    return {pearson(xa, xb), count};
}

// ─── Regimes ────────────────────────────────────────────────────────────────

const char* to_string(Regime regime) noexcept {
    return regime == Regime::contraction ? "contraction" : "expansion";
}

std::optional<double> AnnotatedTable::mean(Regime regime, double threshold) const {
    for (const auto& s : summary) {
        if (s.regime == regime && s.threshold == threshold) return s.mean;
    }
    return std::nullopt;
}

AnnotatedTable annotate_recessions(const SyncResult& result, const RecessionCalendar& calendar) {
    if (calendar.empty()) throw ContractError("recession calendar has no episodes");
    const auto points = result.points();
    if (points == 0) throw ContractError("result has no time points");
    const auto first = result.date_at(0);
    const auto last = result.date_at(points - 1);
    if (calendar.last_month() < first || last <= calendar.first_month()) {
        throw ContractError("calendar " + calendar.first_month().to_string() + ".." +
                            calendar.last_month().to_string() + " does not overlap result range " +
                            first.to_string() + ".." + last.to_string());
    }

    AnnotatedTable table;
    table.regimes.resize(points);
    for (std::size_t j = 0; j < points; ++j) {
        table.regimes[j] = calendar.is_contraction(result.date_at(j)) ? Regime::contraction : Regime::expansion;
    }
    for (const auto& ratio : result.ratios) {
        for (Regime regime : {Regime::contraction, Regime::expansion}) {
            double sum = 0.0;
            std::size_t months = 0;
            for (std::size_t j = 0; j < points; ++j) {
                if (table.regimes[j] != regime) continue;
                sum += ratio.values[j];
                ++months;
            }
            table.summary.push_back({regime, ratio.threshold, months,
                                     months > 0 ? std::optional(sum / static_cast<double>(months)) : std::nullopt});
        }
    }
    return table;
}

}  // namespace phasesync
