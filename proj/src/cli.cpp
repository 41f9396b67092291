#include "dcfault/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "dcfault/config.hpp"
#include "dcfault/error.hpp"
#include "dcfault/sweep.hpp"
#include "dcfault/trace_io.hpp"

namespace dcfault {

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<double> fs;
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<std::size_t> segments;
    std::optional<double> window_ms;
    std::optional<double> min_peak_frac;
    std::string trace;
    std::string peaks_out;
    bool pretty = false;
    std::vector<double> probes{100.0, 400.0, 800.0};
    unsigned threads = 0;
};

void add_common(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    cmd.add_option("--out", f.out, "output file (default: standard output)");
    cmd.add_option("--fs", f.fs, "sampling rate in Hz");
    cmd.add_option("--segments", f.segments, "ladder segments");
    cmd.add_option("--model", f.model, "as-printed | lumped-sqrt | quarter-wave")
        ->check(CLI::IsMember({"as-printed", "lumped-sqrt", "quarter-wave"}));
}

void add_pipeline(CLI::App& cmd, Flags& f) {
    cmd.add_option("--snr-db", f.snr_db, "measurement noise SNR in dB");
    cmd.add_option("--seed", f.seed, "noise seed");
    cmd.add_option("--window-ms", f.window_ms, "envelope window in ms");
    cmd.add_option("--min-peak-frac", f.min_peak_frac, "drop envelope points below this fraction of the peak");
}

AppConfig resolve(const Flags& f) {
    AppConfig cfg = load_config(f.config);
    if (f.fs) cfg.pipeline.fs_hz = *f.fs;
    if (f.snr_db) cfg.pipeline.snr_db = *f.snr_db;
    if (f.seed) cfg.pipeline.seed = *f.seed;
    if (f.segments) {
        if (*f.segments < 1) throw_invalid("--segments", ">= 1");
        cfg.ladder.n_segments = *f.segments;
    }
    auto& loc = cfg.pipeline.locate;
    if (f.model) loc.model.kind = parse_distance_model(*f.model);
    if (f.window_ms) loc.peaks.window = *f.window_ms * 1e-3;
    if (f.min_peak_frac) loc.peaks.min_magnitude_fraction = *f.min_peak_frac;
    if (cfg.sweep) {
        if (f.fs) cfg.sweep->sampling_rates_hz = {*f.fs};
        if (f.snr_db) cfg.sweep->snr_db = *f.snr_db;
        if (f.seed) cfg.sweep->seeds = {*f.seed};
        if (f.model) cfg.sweep->model.kind = loc.model.kind;
    }
    return cfg;
}

const FaultScenario& require_scenario(const AppConfig& cfg) {
    if (!cfg.scenario) throw Error(ErrorKind::MalformedInput, "missing key scenario");
    return *cfg.scenario;
}

/// Writes through `fill` into --out, or into `out` when no path was given.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fill) {
    if (path.empty()) {
        fill(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(ErrorKind::MalformedInput, "cannot open '" + path + "' for writing");
    fill(file);
    if (!file) throw Error(ErrorKind::MalformedInput, "write to '" + path + "' failed");
}

DischargeTrace simulated(const AppConfig& cfg) {
    const FaultScenario& scenario = require_scenario(cfg);
    DischargeTrace trace;
    try {
        trace = simulate_discharge(cfg.line, scenario, cfg.ladder, cfg.pipeline.fs_hz);
    } catch (const Error& e) {
        throw e.with_stage("simulate_discharge");
    }
    return add_noise(trace, cfg.pipeline.snr_db, cfg.pipeline.seed);
}

int cmd_simulate(const Flags& f, std::ostream& out) {
    const AppConfig cfg = resolve(f);
    const DischargeTrace trace = simulated(cfg);
    if (f.out.empty()) {
        write_trace_csv(out, trace);
    } else {
        save_trace(f.out, trace);
    }
    return kExitOk;
}

int cmd_locate(const Flags& f, std::ostream& out) {
    const AppConfig cfg = resolve(f);
    const DischargeTrace trace = f.trace.empty() ? simulated(cfg) : load_trace(f.trace);
    LocateOptions opts = cfg.pipeline.locate;
    std::optional<double> r_fault;
    if (cfg.scenario) {
        opts.d_act_km = cfg.scenario->d_act_km;
        r_fault = cfg.scenario->r_fault;
    }
    const LocationEstimate est = locate(trace, cfg.line, opts);
    if (!f.peaks_out.empty()) {
        const PeakSeries peaks = extract_envelope_peaks(trace, opts.peaks);
        emit(f.peaks_out, out, [&](std::ostream& o) { write_peaks_csv(o, peaks); });
    }
    emit(f.out, out, [&](std::ostream& o) {
        o << estimate_csv_header() << '\n'
          << estimate_csv_row(opts.d_act_km, r_fault, trace.fs, cfg.pipeline.snr_db, cfg.pipeline.seed, est) << '\n';
    });
    return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
    const AppConfig cfg = resolve(f);
    if (!cfg.sweep) throw Error(ErrorKind::MalformedInput, "missing key sweep");
    validate(*cfg.sweep);
    const SweepResult result = run_sweep(*cfg.sweep, cfg.line, cfg.ladder, cfg.pipeline.locate, f.threads);
    emit(f.out, out, [&](std::ostream& o) {
        if (f.pretty) {
            write_sweep_pretty(o, result);
        } else {
            write_sweep_csv(o, result);
        }
    });
    return kExitOk;
}

int cmd_calibrate(const Flags& f, std::ostream& out) {
    const AppConfig cfg = resolve(f);
    CalibrationOptions opts;
    opts.model = cfg.pipeline.locate.model.kind;
    opts.fs = cfg.pipeline.fs_hz;
    opts.locate = cfg.pipeline.locate;
    const CalibrationResult cal = calibrate(cfg.line, f.probes, cfg.ladder, opts);
    emit(f.out, out, [&](std::ostream& o) {
        o << "probe_km,raw_estimate_km,calibrated_km\n";
        for (std::size_t k = 0; k < cal.probes_km.size(); ++k) {
            fmt::print(o, "{:g},{:.6f},{:.6f}\n", cal.probes_km[k], cal.raw_estimates_km[k],
                       cal.factor * cal.raw_estimates_km[k]);
        }
        fmt::print(o, "# model={} calibration_factor={:.9f} residual_spread={:.6f}\n", to_string(opts.model),
                   cal.factor, cal.residual_spread);
    });
    return kExitOk;
}

int exit_code(const Error& e) {
    if (e.kind() == ErrorKind::MalformedInput) return kExitUsage;
    if (e.kind() == ErrorKind::InvalidParameter && e.stage().empty()) return kExitUsage;
    return kExitPipeline;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-ended fault location on an isolated HVdc line", "dcfault"};
    app.require_subcommand(1);
    Flags f;

    auto* sim = app.add_subcommand("simulate", "simulate the discharge transient and write the trace");
    add_common(*sim, f);
    add_pipeline(*sim, f);

    auto* loc = app.add_subcommand("locate", "estimate the fault distance of one scenario or recorded trace");
    add_common(*loc, f);
    add_pipeline(*loc, f);
    loc->add_option("--trace", f.trace, "recorded trace (CSV or binary) instead of simulating");
    loc->add_option("--peaks-out", f.peaks_out, "write the envelope peaks as CSV");

    auto* sw = app.add_subcommand("sweep", "run the distance x resistance x fs x seed cross product");
    add_common(*sw, f);
    add_pipeline(*sw, f);
    sw->add_flag("--pretty", f.pretty, "aligned text instead of CSV");
    sw->add_option("--threads", f.threads, "worker threads (0: hardware count)");

    auto* cal = app.add_subcommand("calibrate", "fit the distance model's calibration factor");
    add_common(*cal, f);
    add_pipeline(*cal, f);
    cal->add_option("--probes", f.probes, "probe distances in km")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(f, out);
        if (loc->parsed()) return cmd_locate(f, out);
        if (sw->parsed()) return cmd_sweep(f, out);
        return cmd_calibrate(f, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    }
}

}  // namespace dcfault
