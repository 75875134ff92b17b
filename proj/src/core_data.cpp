#include "phasesync/core_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace phasesync {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(begin)));
            return fields;
        }
        fields.push_back(trim(line.substr(begin, comma - begin)));
        begin = comma + 1;
    }
}

bool parse_int(std::string_view s, int& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string row_label(std::size_t row, std::string_view column) {
    std::string label = "row " + std::to_string(row);
    if (!column.empty()) label += ", column '" + std::string(column) + "'";
    return label;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

// ─── YearMonth ──────────────────────────────────────────────────────────────

YearMonth::YearMonth(int year, int month) {
    if (month < 1 || month > 12) {
        throw ContractError("month must be in 1..12, got " + std::to_string(month));
    }
    ordinal_ = static_cast<long>(year) * 12 + (month - 1);
}

YearMonth YearMonth::parse(std::string_view text) {
    const auto t = trim(text);
    int year = 0;
    int month = 0;
    if (t.size() != 7 || t[4] != '-' || !parse_int(t.substr(0, 4), year) ||
        !parse_int(t.substr(5, 2), month) || month < 1 || month > 12) {
        throw ContractError("expected YYYY-MM, got '" + std::string(t) + "'");
    }
    return YearMonth(year, month);
}

std::string YearMonth::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
}

// ─── TimeSeries / Panel ─────────────────────────────────────────────────────

TimeSeries::TimeSeries(std::string id, YearMonth start, std::vector<double> values)
    : id_(std::move(id)), start_(start), values_(std::move(values)) {
    if (values_.size() < 2) {
        throw ContractError("series '" + id_ + "' needs at least 2 values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ContractError("series '" + id_ + "' has a non-finite value at index " +
                                std::to_string(i));
        }
    }
}

Panel::Panel(std::vector<TimeSeries> series) : series_(std::move(series)) {
    if (series_.empty()) throw ContractError("panel needs at least one series");
    std::set<std::string_view> ids;
    for (const auto& s : series_) {
        if (s.start() != series_.front().start() || s.size() != series_.front().size()) {
            throw ContractError("series '" + s.id() + "' is not aligned with '" +
                                series_.front().id() + "'");
        }
        if (!ids.insert(s.id()).second) {
            throw ContractError("duplicate series id '" + s.id() + "'");
        }
    }
}

// ─── FilterBand and period arithmetic ───────────────────────────────────────

bool FilterBand::is_valid(std::size_t n) const noexcept {
    return lower >= 1 && lower <= upper && static_cast<std::size_t>(upper) <= n / 2;
}

void FilterBand::validate(std::size_t n) const {
    if (!is_valid(n)) {
        throw ContractError("band " + to_string() + " must satisfy 1 <= k_l <= k_u <= floor(N/2) = " +
                            std::to_string(n / 2));
    }
}

std::string FilterBand::to_string() const {
    return "(k_l=" + std::to_string(lower) + ", k_u=" + std::to_string(upper) + ")";
}

long round_half_up(double x) noexcept { return static_cast<long>(std::floor(x + 0.5)); }

BandPeriods periods_of_band(std::size_t n, const FilterBand& band) {
    band.validate(n);
    const auto len = static_cast<double>(n);
    return {len / band.upper, len / band.lower};
}

FilterBand band_from_periods(std::size_t n, double longest_period, double shortest_period) {
    const auto len = static_cast<double>(n);
    if (!(shortest_period >= 2.0 && shortest_period <= longest_period && longest_period <= len)) {
        throw ContractError("periods must satisfy 2 <= shortest <= longest <= N");
    }
    const long max_k = static_cast<long>(n / 2);
    const auto clamp_k = [max_k](long k) { return std::clamp<long>(k, 1, std::max<long>(1, max_k)); };
    FilterBand band{static_cast<int>(clamp_k(round_half_up(len / longest_period))),
                    static_cast<int>(clamp_k(round_half_up(len / shortest_period)))};
    if (band.lower > band.upper) {
        throw ContractError("derived band " + band.to_string() + " has k_l > k_u");
    }
    band.validate(n);
    return band;
}

// ─── RecessionCalendar ──────────────────────────────────────────────────────

RecessionCalendar::RecessionCalendar(std::vector<RecessionEpisode> episodes)
    : episodes_(std::move(episodes)) {
    for (std::size_t i = 0; i < episodes_.size(); ++i) {
        const auto& e = episodes_[i];
        if (!(e.peak < e.trough)) {
            throw ContractError("episode " + e.peak.to_string() + "/" + e.trough.to_string() +
                                ": peak must precede trough");
        }
        if (i > 0 && e.peak < episodes_[i - 1].trough) {
            throw ContractError("episode starting " + e.peak.to_string() +
                                " overlaps or precedes the previous one");
        }
    }
}

bool RecessionCalendar::is_contraction(YearMonth month) const noexcept {
    const auto it = std::lower_bound(
        episodes_.begin(), episodes_.end(), month,
        [](const RecessionEpisode& e, YearMonth m) { return e.trough < m; });
    return it != episodes_.end() && it->peak < month;
}

// ─── CSV I/O ────────────────────────────────────────────────────────────────

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

Panel read_panel_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty input: missing header row");

    const auto header = split_fields(line);
    if (header.empty() || header.front() != "date") {
        throw IngestError("header must start with 'date'");
    }
    if (header.size() < 2) throw IngestError("header names no series columns");

    std::vector<std::string> ids;
    std::set<std::string_view> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) throw IngestError("empty column id in header", 0, "#" + std::to_string(c + 1));
        if (!seen.insert(header[c]).second) {
            throw IngestError("duplicate column id '" + std::string(header[c]) + "'", 0,
                              std::string(header[c]));
        }
        ids.emplace_back(header[c]);
    }

    std::vector<std::vector<double>> columns(ids.size());
    YearMonth start;
    YearMonth previous;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw IngestError(row_label(row, {}) + ": expected " + std::to_string(header.size()) +
                                  " cells, found " + std::to_string(fields.size()),
                              row);
        }
        YearMonth date;
        try {
            date = YearMonth::parse(fields[0]);
        } catch (const ContractError& e) {
            throw IngestError(row_label(row, "date") + ": " + e.what(), row, "date");
        }
        if (row == 1) {
            start = date;
        } else if (date - previous != 1) {
            throw IngestError(row_label(row, "date") + ": non-consecutive calendar (" +
                                  previous.to_string() + " followed by " + date.to_string() + ")",
                              row, "date");
        }
        previous = date;

        for (std::size_t c = 0; c < ids.size(); ++c) {
            const auto cell = fields[c + 1];
            if (cell.empty()) {
                throw IngestError(row_label(row, ids[c]) + ": missing value", row, ids[c]);
            }
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw IngestError(row_label(row, ids[c]) + ": non-numeric value '" +
                                      std::string(cell) + "'",
                                  row, ids[c]);
            }
            columns[c].push_back(v);
        }
    }
    if (row < 2) throw IngestError("need at least 2 data rows, found " + std::to_string(row));

    std::vector<TimeSeries> series;
    series.reserve(ids.size());
    for (std::size_t c = 0; c < ids.size(); ++c) {
        series.emplace_back(ids[c], start, std::move(columns[c]));
    }
    return Panel(std::move(series));
}

Panel load_panel_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
    out << "date";
    for (const auto& s : panel.series()) out << ',' << s.id();
    out << '\n';
    for (std::size_t t = 0; t < panel.length(); ++t) {
        out << (panel.start() + static_cast<long>(t)).to_string();
        for (const auto& s : panel.series()) out << ',' << format_number(s.values()[t]);
        out << '\n';
    }
}

RecessionCalendar read_recession_calendar(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty input: missing header row");
    const auto header = split_fields(line);
    if (header.size() != 2 || header[0] != "peak" || header[1] != "trough") {
        throw IngestError("calendar header must be 'peak,trough'");
    }
    std::vector<RecessionEpisode> episodes;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw IngestError(row_label(row, {}) + ": expected 2 cells", row);
        }
        try {
            episodes.push_back({YearMonth::parse(fields[0]), YearMonth::parse(fields[1])});
        } catch (const ContractError& e) {
            throw IngestError(row_label(row, {}) + ": " + e.what(), row);
        }
    }
    try {
        return RecessionCalendar(std::move(episodes));
    } catch (const ContractError& e) {
        throw IngestError(std::string("invalid calendar: ") + e.what());
    }
}

RecessionCalendar load_recession_calendar(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_recession_calendar(in);
}

}  // namespace phasesync
