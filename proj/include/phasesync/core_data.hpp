#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasesync/errors.hpp"

namespace phasesync {

/// Calendar month. Ordering and arithmetic go through a month ordinal so that
/// year boundaries need no special casing.
class YearMonth {
public:
    constexpr YearMonth() = default;
    YearMonth(int year, int month);

    /// Parses `YYYY-MM`. Throws ContractError on anything else.
    static YearMonth parse(std::string_view text);
    static constexpr YearMonth from_ordinal(long ordinal) {
        YearMonth ym;
        ym.ordinal_ = ordinal;
        return ym;
    }

    [[nodiscard]] constexpr int year() const noexcept {
        return static_cast<int>(floor_div(ordinal_, 12));
    }
    [[nodiscard]] constexpr int month() const noexcept {
        return static_cast<int>(ordinal_ - floor_div(ordinal_, 12) * 12) + 1;
    }
    [[nodiscard]] constexpr long ordinal() const noexcept { return ordinal_; }

    [[nodiscard]] std::string to_string() const;

    constexpr YearMonth operator+(long months) const noexcept { return from_ordinal(ordinal_ + months); }
    constexpr YearMonth operator-(long months) const noexcept { return from_ordinal(ordinal_ - months); }
    constexpr long operator-(const YearMonth& other) const noexcept { return ordinal_ - other.ordinal_; }

    constexpr auto operator<=>(const YearMonth&) const = default;

private:
    static constexpr long floor_div(long a, long b) noexcept {
        return a >= 0 ? a / b : -((-a + b - 1) / b);
    }

    long ordinal_ = 0;  // year * 12 + (month - 1)
};

/// One region's monthly series. Immutable once constructed.
class TimeSeries {
public:
    /// Throws ContractError if fewer than two values or any value is not finite.
    TimeSeries(std::string id, YearMonth start, std::vector<double> values);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] YearMonth start() const noexcept { return start_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] YearMonth date_at(std::size_t index) const noexcept {
        return start_ + static_cast<long>(index);
    }

private:
    std::string id_;
    YearMonth start_;
    std::vector<double> values_;
};

/// Aligned collection of series sharing one calendar.
class Panel {
public:
    /// Members must be non-empty, share start and length, and have unique ids.
    explicit Panel(std::vector<TimeSeries> series);

    [[nodiscard]] std::span<const TimeSeries> series() const noexcept { return series_; }
    [[nodiscard]] const TimeSeries& operator[](std::size_t i) const { return series_.at(i); }
    [[nodiscard]] std::size_t members() const noexcept { return series_.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return series_.front().size(); }
    [[nodiscard]] YearMonth start() const noexcept { return series_.front().start(); }

private:
    std::vector<TimeSeries> series_;
};

/// Integer cutoff frequencies, in cycles per record, of the Fourier band-pass.
struct FilterBand {
    int lower = 1;
    int upper = 1;

    /// Throws ContractError unless 1 <= lower <= upper <= floor(n/2).
    void validate(std::size_t n) const;
    [[nodiscard]] bool is_valid(std::size_t n) const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const FilterBand&, const FilterBand&) = default;
};

struct BandPeriods {
    double shortest = 0.0;  // n / upper
    double longest = 0.0;   // n / lower
};

/// floor(x + 0.5); ties go up.
[[nodiscard]] long round_half_up(double x) noexcept;

[[nodiscard]] BandPeriods periods_of_band(std::size_t n, const FilterBand& band);

/// Inverse of periods_of_band, rounding half up and clamping to [1, floor(n/2)].
[[nodiscard]] FilterBand band_from_periods(std::size_t n, double longest_period, double shortest_period);

struct RecessionEpisode {
    YearMonth peak;
    YearMonth trough;
};

/// Peak-to-trough episodes. A month m is a contraction month of an episode
/// when peak < m <= trough: the peak is the last expansion month, the trough
/// the last contraction month.
class RecessionCalendar {
public:
    /// Episodes must be chronological, non-overlapping, and have peak < trough.
    explicit RecessionCalendar(std::vector<RecessionEpisode> episodes);

    [[nodiscard]] std::span<const RecessionEpisode> episodes() const noexcept { return episodes_; }
    [[nodiscard]] bool is_contraction(YearMonth month) const noexcept;
    /// First peak and last trough. Undefined on an empty calendar.
    [[nodiscard]] YearMonth first_month() const { return episodes_.front().peak; }
    [[nodiscard]] YearMonth last_month() const { return episodes_.back().trough; }
    [[nodiscard]] bool empty() const noexcept { return episodes_.empty(); }

private:
    std::vector<RecessionEpisode> episodes_;
};

/// Formats with 12 significant digits (`%.12g`), the precision of every
/// numeric field this library writes.
[[nodiscard]] std::string format_number(double value);

/// Reads `date,<id1>,<id2>,...` with `YYYY-MM` dates in consecutive months.
/// Throws IngestError naming the row and column at fault.
[[nodiscard]] Panel read_panel_csv(std::istream& in);
[[nodiscard]] Panel load_panel_csv(const std::filesystem::path& path);
void write_panel_csv(std::ostream& out, const Panel& panel);

/// Reads `peak,trough` rows of `YYYY-MM` values.
[[nodiscard]] RecessionCalendar read_recession_calendar(std::istream& in);
[[nodiscard]] RecessionCalendar load_recession_calendar(const std::filesystem::path& path);

}  // namespace phasesync
