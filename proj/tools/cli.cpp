#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasesync/core_data.hpp"
#include "phasesync/panel_analysis.hpp"
#include "phasesync/spectral.hpp"
#include "phasesync/synthetic.hpp"

namespace phasesync::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Bad flag combinations detected after CLI11 has accepted the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Files are written as `<name>.partial` and renamed into place only when every
// file of the command has been written. Anything left uncommitted is removed.
class OutputSet {
public:
    OutputSet() = default;
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (auto& f : files_) {
            f.stream.close();
            fs::remove(partial_path(f.path), ec);
        }
        for (const auto& p : renamed_) fs::remove(p, ec);
    }

    std::ostream& open(const fs::path& path) {
        auto& f = files_.emplace_back(File{path, std::ofstream(partial_path(path), std::ios::binary)});
        if (!f.stream) throw std::runtime_error("cannot write '" + path.string() + "'");
        return f.stream;
    }

    void commit() {
        for (auto& f : files_) {
            f.stream.close();
            if (!f.stream) throw std::runtime_error("failed writing '" + f.path.string() + "'");
        }
        for (const auto& f : files_) {
            fs::rename(partial_path(f.path), f.path);
            renamed_.push_back(f.path);
        }
        committed_ = true;
    }

private:
    struct File {
        fs::path path;
        std::ofstream stream;
    };

    static fs::path partial_path(const fs::path& path) {
        auto p = path;
        p += ".partial";
        return p;
    }

    std::list<File> files_;  // stable addresses for the returned streams
    std::vector<fs::path> renamed_;
    bool committed_ = false;
};

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedPanel {
    Panel panel;
    std::string digest;
};

LoadedPanel load_input(const fs::path& path) {
    const auto bytes = read_bytes(path);
    std::istringstream in(bytes);
    try {
        return {read_panel_csv(in), fnv1a64_hex(bytes)};
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": " + e.what(), e.row(), e.column());
    }
}

unsigned workers_from_env() {
    const char* raw = std::getenv(kWorkersEnv);
    if (raw == nullptr || *raw == '\0') return 0;
    const std::string_view text(raw);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError(std::string(kWorkersEnv) + " must be a non-negative integer, got '" + raw + "'");
    }
    return value;
}

std::string yes_no(bool v) { return v ? "true" : "false"; }

// ─── Shared flags ───────────────────────────────────────────────────────────

struct BandFlags {
    std::optional<int> kl;
    std::optional<int> ku;
    std::optional<double> longest;
    std::optional<double> shortest;

    void add_to(CLI::App& app) {
        app.add_option("--kl", kl, "Lower cutoff frequency k_l (cycles per record)");
        app.add_option("--ku", ku, "Upper cutoff frequency k_u (cycles per record)");
        app.add_option("--longest", longest, "Longest period kept, in months");
        app.add_option("--shortest", shortest, "Shortest period kept, in months");
    }

    // Defaults to (4, 18) when no band flag is given.
    [[nodiscard]] FilterBand resolve(std::size_t n) const {
        const bool freq = kl || ku;
        const bool period = longest || shortest;
        if (freq && period) throw UsageError("use either --kl/--ku or --longest/--shortest, not both");
        if (freq) {
            if (!kl || !ku) throw UsageError("--kl and --ku must be given together");
            return {*kl, *ku};
        }
        if (period) {
            if (!longest || !shortest) throw UsageError("--longest and --shortest must be given together");
            return band_from_periods(n, *longest, *shortest);
        }
        return PipelineConfig{}.band;
    }
};

struct PipelineFlags {
    std::string input;
    std::string out;
    BandFlags band;
    int window = 13;
    std::vector<double> thresholds;
    bool detrend = true;
    bool trim = true;
    double amplitude_floor = kDefaultAmplitudeFloor;
    std::string calendar;

    void add_to(CLI::App& app) {
        app.add_option("input,--input", input, "Panel CSV (date,<id1>,<id2>,...)")->required();
        app.add_option("--out", out, "Output directory")->required();
        band.add_to(app);
        app.add_option("--window", window, "Sync window W (odd, >= 3)")->capture_default_str();
        app.add_option("--r", thresholds, "Sync threshold r; repeat for several (default 0.7 and 0.8)")
            ->expected(1)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        app.add_flag("--detrend,!--no-detrend", detrend, "Remove a least-squares line before filtering");
        app.add_flag("--trim,!--no-trim", trim, "Drop round(N/k_u) phases at each end");
        app.add_option("--amplitude-floor", amplitude_floor, "Relative amplitude floor for phase extraction");
        app.add_option("--calendar", calendar, "Recession calendar CSV (peak,trough)");
    }

    [[nodiscard]] PipelineConfig config(std::size_t n) const {
        PipelineConfig c;
        c.band = band.resolve(n);
        c.window = window;
        if (!thresholds.empty()) {
            c.thresholds = thresholds;
            std::sort(c.thresholds.begin(), c.thresholds.end());
            c.thresholds.erase(std::unique(c.thresholds.begin(), c.thresholds.end()), c.thresholds.end());
        }
        c.detrend = detrend;
        c.trim = trim;
        c.amplitude_floor = amplitude_floor;
        c.workers = workers_from_env();
        return c;
    }

    [[nodiscard]] std::optional<RecessionCalendar> load_calendar() const {
        if (calendar.empty()) return std::nullopt;
        return load_recession_calendar(calendar);
    }
};

void write_result_files(OutputSet& outputs, const fs::path& dir, const SyncResult& result,
                        const std::optional<RecessionCalendar>& calendar, const std::string& digest) {
    std::optional<AnnotatedTable> table;
    if (calendar) table = annotate_recessions(result, *calendar);

    write_gamma_csv(outputs.open(dir / "gamma2.csv"), result);
    write_ratio_wide_csv(outputs.open(dir / "ratio.csv"), result, table ? &*table : nullptr);
    write_ratio_long_csv(outputs.open(dir / "ratio_long.csv"), result);
    if (table) write_regime_summary_csv(outputs.open(dir / "regime_summary.csv"), *table);

    auto meta = describe(result);
    meta.emplace_back("input_digest", digest);
    write_metadata(outputs.open(dir / "metadata.txt"), meta);
}

// ─── Commands ───────────────────────────────────────────────────────────────

struct FilterCommand {
    std::string input;
    std::string out;
    BandFlags band;
    bool detrend = true;

    void add_to(CLI::App& app) {
        app.add_option("input,--input", input, "Panel CSV (date,<id1>,<id2>,...)")->required();
        app.add_option("--out", out, "Filtered panel CSV; metadata goes to <out>.meta")->required();
        band.add_to(app);
        app.add_flag("--detrend,!--no-detrend", detrend, "Remove a least-squares line before filtering");
    }

    int run(std::ostream& out_stream) const {
        const auto loaded = load_input(input);
        const auto& panel = loaded.panel;
        const auto n = panel.length();
        const auto fb = band.resolve(n);
        fb.validate(n);

        std::vector<TimeSeries> filtered;
        filtered.reserve(panel.members());
        for (const auto& s : panel.series()) {
            auto y = detrend ? bandpass(detrend_linear(s.values()), fb) : bandpass(s.values(), fb);
            filtered.emplace_back(s.id(), s.start(), std::move(y));
        }

        const auto periods = periods_of_band(n, fb);
        const MetaEntries meta{
            {"length", std::to_string(n)},
            {"members", std::to_string(panel.members())},
            {"start", panel.start().to_string()},
            {"k_l", std::to_string(fb.lower)},
            {"k_u", std::to_string(fb.upper)},
            {"shortest_period", format_number(periods.shortest)},
            {"longest_period", format_number(periods.longest)},
            {"shortest_period_rounded", std::to_string(round_half_up(periods.shortest))},
            {"longest_period_rounded", std::to_string(round_half_up(periods.longest))},
            {"detrend", yes_no(detrend)},
            {"input_digest", loaded.digest},
        };

        OutputSet outputs;
        write_panel_csv(outputs.open(out), Panel(std::move(filtered)));
        write_metadata(outputs.open(out + ".meta"), meta);
        outputs.commit();
        out_stream << "band " << fb.to_string() << ": periods " << format_number(periods.shortest) << " to "
                   << format_number(periods.longest) << " months\n";
        return 0;
    }
};

struct SyncCommand {
    PipelineFlags flags;

    int run(std::ostream& out_stream) const {
        const auto loaded = load_input(flags.input);
        const auto config = flags.config(loaded.panel.length());
        const auto calendar = flags.load_calendar();
        const auto result = run_pipeline(loaded.panel, config);

        const fs::path dir(flags.out);
        fs::create_directories(dir);
        OutputSet outputs;
        write_result_files(outputs, dir, result, calendar, loaded.digest);
        outputs.commit();
        out_stream << result.pairs.size() << " pairs, " << result.points() << " points ("
                   << result.date_at(0).to_string() << " to " << result.date_at(result.points() - 1).to_string()
                   << ")\n";
        return 0;
    }
};

struct SweepCommand {
    PipelineFlags flags;
    std::vector<int> windows;
    std::vector<std::string> bands;

    void add_to(CLI::App& app) {
        flags.add_to(app);
        auto* w = app.add_option("--windows", windows, "Comma-separated window lengths")->delimiter(',');
        auto* b = app.add_option("--bands", bands, "Comma-separated k_l:k_u bands")->delimiter(',');
        w->excludes(b);
    }

    struct Setting {
        std::string label;
        PipelineConfig config;
    };

    static FilterBand parse_band(const std::string& text) {
        const auto colon = text.find(':');
        int lo = 0;
        int hi = 0;
        const auto parse_int = [&](std::string_view s, int& v) {
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
        };
        const std::string_view sv(text);
        if (colon == std::string::npos || !parse_int(sv.substr(0, colon), lo) ||
            !parse_int(sv.substr(colon + 1), hi)) {
            throw UsageError("band '" + text + "' is not of the form k_l:k_u");
        }
        return {lo, hi};
    }

    [[nodiscard]] std::vector<Setting> settings(std::size_t n) const {
        if (windows.empty() == bands.empty()) throw UsageError("sweep needs exactly one of --windows or --bands");
        const auto base = flags.config(n);
        std::vector<Setting> out;
        for (int w : windows) {
            auto c = base;
            c.window = w;
            out.push_back({"W" + std::to_string(w), c});
        }
        for (const auto& text : bands) {
            auto c = base;
            c.band = parse_band(text);
            out.push_back({"k" + std::to_string(c.band.lower) + "-" + std::to_string(c.band.upper), c});
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (out[i].label == out[j].label) throw UsageError("sweep setting " + out[i].label + " repeated");
            }
        }
        return out;
    }

    int run(std::ostream& out_stream) const {
        const auto loaded = load_input(flags.input);
        const auto list = settings(loaded.panel.length());
        const auto calendar = flags.load_calendar();

        std::vector<SyncResult> results;
        results.reserve(list.size());
        for (const auto& s : list) {
            try {
                results.push_back(run_pipeline(loaded.panel, s.config));
            } catch (const ContractError& e) {
                throw ContractError("setting " + s.label + ": " + e.what());
            }
        }

        const fs::path dir(flags.out);
        fs::create_directories(dir);
        OutputSet outputs;
        MetaEntries meta{{"input_digest", loaded.digest}};
        for (std::size_t i = 0; i < list.size(); ++i) {
            std::optional<AnnotatedTable> table;
            if (calendar) table = annotate_recessions(results[i], *calendar);
            write_ratio_wide_csv(outputs.open(dir / ("ratio_" + list[i].label + ".csv")), results[i],
                                 table ? &*table : nullptr);
            for (const auto& [key, value] : describe(results[i])) {
                meta.emplace_back(list[i].label + "." + key, value);
            }
        }

        auto& stability = outputs.open(dir / "stability.csv");
        stability << "setting_a,setting_b,r,correlation,points\n";
        double worst = 1.0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            for (std::size_t j = i + 1; j < list.size(); ++j) {
                for (const auto& ratio : results[i].ratios) {
                    const auto cmp = compare_ratios(results[i], results[j], ratio.threshold);
                    stability << list[i].label << ',' << list[j].label << ',' << format_number(ratio.threshold)
                              << ',' << format_number(cmp.correlation) << ',' << cmp.points << '\n';
                    worst = std::min(worst, cmp.correlation);
                }
            }
        }
        write_metadata(outputs.open(dir / "metadata.txt"), meta);
        outputs.commit();
        out_stream << list.size() << " settings";
        if (list.size() > 1) out_stream << ", minimum correlation " << format_number(worst);
        out_stream << '\n';
        return 0;
    }
};

struct GenCommand {
    std::string out;
    bool sine = false;
    std::optional<double> period;
    std::optional<std::size_t> n;
    std::size_t members = 0;
    std::vector<double> amps;
    std::vector<double> phases;
    std::string regime;
    RegimeSpec spec;
    std::string start = "2000-01";
    std::string calendar_out;

    void add_to(CLI::App& app) {
        app.add_option("--out", out, "Output panel CSV")->required();
        auto* s = app.add_flag("--sine", sine, "Generate pure sinusoids");
        auto* r = app.add_option("--regime", regime, "Segments, e.g. coupled:120,uncoupled:120,coupled:120");
        s->excludes(r);
        app.add_option("--period", period, "Sine period in months");
        app.add_option("--n", n, "Sine length in months");
        app.add_option("--members", members, "Number of series")->required();
        app.add_option("--amp", amps, "Sine amplitudes, one per member or one for all")->delimiter(',');
        app.add_option("--phase", phases, "Sine phase offsets in radians, one per member or one for all")
            ->delimiter(',');
        app.add_option("--base-period", spec.base_period, "Regime common period in months")->capture_default_str();
        app.add_option("--jitter", spec.jitter, "Regime frequency jitter, cycles per month")->capture_default_str();
        app.add_option("--wander", spec.wander, "Regime frequency-state step size in [0, 1]")->capture_default_str();
        app.add_option("--noise", spec.noise_sd, "Regime observation noise sd")->capture_default_str();
        app.add_option("--seed", spec.seed, "Regime RNG seed")->capture_default_str();
        app.add_option("--start", start, "First month, YYYY-MM")->capture_default_str();
        app.add_option("--calendar-out", calendar_out, "Write the coupled stretches as a peak,trough calendar");
    }

    static double pick(const std::vector<double>& v, std::size_t i, double fallback, const char* flag,
                       std::size_t members) {
        if (v.empty()) return fallback;
        if (v.size() == 1) return v.front();
        if (v.size() != members) {
            throw UsageError(std::string(flag) + " needs 1 or " + std::to_string(members) + " values, got " +
                             std::to_string(v.size()));
        }
        return v[i];
    }

    int run(std::ostream& out_stream) const {
        if (sine == !regime.empty()) throw UsageError("gen needs exactly one of --sine or --regime");
        if (members == 0) throw UsageError("--members must be at least 1");
        const auto first = YearMonth::parse(start);

        OutputSet outputs;
        if (sine) {
            if (!n) throw UsageError("--sine requires --n");
            if (!period) throw UsageError("--sine requires --period");
            if (!calendar_out.empty()) throw UsageError("--calendar-out applies to --regime only");
            std::vector<TimeSeries> series;
            for (std::size_t i = 0; i < members; ++i) {
                series.push_back(gen_sine(*n, *period, pick(amps, i, 1.0, "--amp", members),
                                          pick(phases, i, 0.0, "--phase", members), "s" + std::to_string(i + 1),
                                          first));
            }
            write_panel_csv(outputs.open(out), Panel(std::move(series)));
            outputs.commit();
            out_stream << "wrote " << members << " sine series of length " << *n << '\n';
            return 0;
        }

        if (n || period || !amps.empty() || !phases.empty()) {
            throw UsageError("--n, --period, --amp and --phase apply to --sine only");
        }
        auto s = spec;
        s.segments = RegimeSpec::parse_segments(regime);
        s.start = first;
        const auto panel = gen_regime_panel(members, s);
        write_panel_csv(outputs.open(out), panel);
        if (!calendar_out.empty()) {
            auto& cal = outputs.open(calendar_out);
            cal << "peak,trough\n";
            const auto calendar = regime_calendar(s);
            for (const auto& e : calendar.episodes()) {
                cal << e.peak.to_string() << ',' << e.trough.to_string() << '\n';
            }
        }
        outputs.commit();
        out_stream << "seed=" << s.seed << '\n';
        return 0;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phase synchronization analysis for panels of monthly series", "phasesync"};
    app.require_subcommand(1);

    FilterCommand filter;
    auto* filter_app = app.add_subcommand("filter", "Band-pass every series of a panel");
    filter.add_to(*filter_app);

    SyncCommand sync;
    auto* sync_app = app.add_subcommand("sync", "Pairwise gamma2 and ratio series for a panel");
    sync.flags.add_to(*sync_app);

    SweepCommand sweep;
    auto* sweep_app = app.add_subcommand("sweep", "Repeat sync over windows or bands and compare");
    sweep.add_to(*sweep_app);

    GenCommand gen;
    auto* gen_app = app.add_subcommand("gen", "Write a synthetic panel");
    gen.add_to(*gen_app);

    CLI::App* active = &app;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        for (auto* sub : {filter_app, sync_app, sweep_app, gen_app}) {
            if (sub->parsed()) active = sub;
        }
        if (filter_app->parsed()) return filter.run(out);
        if (sync_app->parsed()) return sync.run(out);
        if (sweep_app->parsed()) return sweep.run(out);
        return gen.run(out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    } catch (const UsageError& e) {
        err << "phasesync: error: " << e.what() << "\n\n" << active->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "phasesync: error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace phasesync::cli
