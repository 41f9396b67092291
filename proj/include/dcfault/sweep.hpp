#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcfault/locator.hpp"

namespace dcfault {

/// Cross product of distances x resistances x sampling rates x seeds.
struct SweepSpec {
    std::vector<double> distances_km;
    std::vector<double> resistances_ohm;
    std::vector<double> sampling_rates_hz{10e3};
    std::optional<double> snr_db;
    std::vector<std::uint64_t> seeds{0};
    DistanceModel model{};
    /// Replace model.calibration_factor by `calibrate` over the probes before running.
    bool calibrate = false;
    std::vector<double> calibration_probes_km{100.0, 400.0, 800.0};
};

/// InvalidParameter if any list is empty.
void validate(const SweepSpec& spec);

struct SweepRow {
    double d_act_km = 0.0;
    double r_fault_ohm = 0.0;
    double fs_hz = 0.0;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    std::optional<LocationEstimate> estimate;
    std::string error;  ///< "<Kind> at stage <stage>" when estimate is empty
};

/// min/max epsilon across seeds of one (distance, resistance, fs) scenario.
struct ScenarioSpread {
    double d_act_km = 0.0;
    double r_fault_ohm = 0.0;
    double fs_hz = 0.0;
    std::size_t count = 0;
    double epsilon_min = 0.0;
    double epsilon_max = 0.0;
};

struct SweepSummary {
    std::size_t rows = 0;
    std::size_t errors = 0;
    std::optional<double> max_epsilon_pct;
    std::optional<double> mean_epsilon_pct;
    std::optional<double> min_r_squared;
    std::vector<ScenarioSpread> spreads;
};

struct SweepResult {
    DistanceModel model{};
    std::vector<SweepRow> rows;  ///< sorted by (distance, resistance, fs, seed)
    SweepSummary summary;
};

/// Runs every scenario of the cross product. Each (distance, resistance, fs)
/// is simulated once; seeds only vary the injected noise. Per-row failures are
/// recorded and the sweep continues. `threads == 0` uses the hardware count.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, const LineParameters& line, const LadderOptions& ladder,
                                    const LocateOptions& base = {}, unsigned threads = 0);

/// Aggregates rows; max/mean/min are taken over the rows themselves.
[[nodiscard]] SweepSummary summarize(std::span<const SweepRow> rows);

[[nodiscard]] std::string estimate_csv_header();
/// `d_act_km,r_fault_ohm,fs_hz,snr_db,seed,alpha_1ps,f_d_hz,d_cal_km,epsilon_pct,r_squared,model`
[[nodiscard]] std::string estimate_csv_row(std::optional<double> d_act_km, std::optional<double> r_fault_ohm,
                                           double fs_hz, std::optional<double> snr_db, std::uint64_t seed,
                                           const LocationEstimate& estimate);

/// Header plus one row per SweepRow (trailing `status` column), then `#` summary lines.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Aligned text table of the same content.
void write_sweep_pretty(std::ostream& out, const SweepResult& result);

}  // namespace dcfault
