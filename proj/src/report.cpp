#include <cstdint>
#include <cstdio>
#include <ostream>

#include "phasesync/panel_analysis.hpp"

namespace phasesync {

void write_gamma_csv(std::ostream& out, const SyncResult& result) {
    out << "t,date,pair_i,pair_j,gamma2\n";
    for (const auto& pair : result.pairs) {
        for (std::size_t j = 0; j < pair.sync.size(); ++j) {
            out << result.time_index(j) << ',' << result.date_at(j).to_string() << ',' << pair.id_i << ','
                << pair.id_j << ',' << format_number(pair.sync.gamma2[j]) << '\n';
        }
    }
}

void write_ratio_long_csv(std::ostream& out, const SyncResult& result) {
    out << "t,date,r,R\n";
    for (std::size_t j = 0; j < result.points(); ++j) {
        for (const auto& ratio : result.ratios) {
            out << result.time_index(j) << ',' << result.date_at(j).to_string() << ','
                << format_number(ratio.threshold) << ',' << format_number(ratio.values[j]) << '\n';
        }
    }
}

void write_ratio_wide_csv(std::ostream& out, const SyncResult& result, const AnnotatedTable* regimes) {
    out << "t,date";
    for (const auto& ratio : result.ratios) out << ",R_" << format_number(ratio.threshold);
    if (regimes != nullptr) out << ",regime";
    out << '\n';
    for (std::size_t j = 0; j < result.points(); ++j) {
        out << result.time_index(j) << ',' << result.date_at(j).to_string();
        for (const auto& ratio : result.ratios) out << ',' << format_number(ratio.values[j]);
        if (regimes != nullptr) out << ',' << to_string(regimes->regimes.at(j));
        out << '\n';
    }
}

void write_regime_summary_csv(std::ostream& out, const AnnotatedTable& table) {
    out << "regime,r,mean_R,months\n";
    for (const auto& s : table.summary) {
        out << to_string(s.regime) << ',' << format_number(s.threshold) << ','
            << (s.mean ? format_number(*s.mean) : std::string()) << ',' << s.months << '\n';
    }
}

MetaEntries describe(const SyncResult& result) {
    const auto& meta = result.meta;
    const auto& config = meta.config;
    std::string thresholds;
    for (double r : config.thresholds) {
        if (!thresholds.empty()) thresholds += ',';
        thresholds += format_number(r);
    }
    MetaEntries entries{
        {"length", std::to_string(meta.length)},
        {"members", std::to_string(meta.members)},
        {"pairs", std::to_string(result.pairs.size())},
        {"start", meta.start.to_string()},
        {"k_l", std::to_string(config.band.lower)},
        {"k_u", std::to_string(config.band.upper)},
        {"shortest_period", format_number(meta.periods.shortest)},
        {"longest_period", format_number(meta.periods.longest)},
        {"shortest_period_rounded", std::to_string(round_half_up(meta.periods.shortest))},
        {"longest_period_rounded", std::to_string(round_half_up(meta.periods.longest))},
        {"window", std::to_string(config.window)},
        {"thresholds", thresholds},
        {"detrend", config.detrend ? "true" : "false"},
        {"trim", config.trim ? "true" : "false"},
        {"amplitude_floor", format_number(config.amplitude_floor)},
        {"trim_offset", std::to_string(meta.trim_offset)},
        {"window_offset", std::to_string(config.window / 2)},
        {"first_t", std::to_string(result.time_index(0))},
        {"points", std::to_string(result.points())},
    };
    if (result.points() > 0) {
        entries.emplace_back("first_date", result.date_at(0).to_string());
        entries.emplace_back("last_date", result.date_at(result.points() - 1).to_string());
    }
    return entries;
}

void write_metadata(std::ostream& out, const MetaEntries& entries) {
    for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace phasesync
