#include "dcfault/sweep.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "dcfault/error.hpp"

namespace dcfault {

void validate(const SweepSpec& spec) {
    if (spec.distances_km.empty()) throw_invalid("sweep.distances_km", "non-empty");
    if (spec.resistances_ohm.empty()) throw_invalid("sweep.resistances_ohm", "non-empty");
    if (spec.sampling_rates_hz.empty()) throw_invalid("sweep.sampling_rates_hz", "non-empty");
    if (spec.seeds.empty()) throw_invalid("sweep.seeds", "non-empty");
    validate(spec.model);
}

namespace {

struct Group {
    double d;
    double r;
    double fs;
};

std::string describe(const Error& e) {
    std::string s(to_string(e.kind()));
    if (!e.stage().empty()) s += " at stage " + e.stage();
    return s;
}

std::string opt_num(std::optional<double> v) { return v ? fmt::format("{:g}", *v) : std::string{}; }

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const LineParameters& line, const LadderOptions& ladder,
                      const LocateOptions& base, unsigned threads) {
    validate(spec);
    validate(line);

    SweepResult result;
    result.model = spec.model;
    if (spec.calibrate) {
        CalibrationOptions cal;
        cal.model = spec.model.kind;
        cal.fs = spec.sampling_rates_hz.front();
        cal.locate = base;
        result.model.calibration_factor = calibrate(line, spec.calibration_probes_km, ladder, cal).factor;
    }

    std::vector<Group> groups;
    for (double d : spec.distances_km)
        for (double r : spec.resistances_ohm)
            for (double fs : spec.sampling_rates_hz) groups.push_back({d, r, fs});

    const std::size_t per_group = spec.seeds.size();
    result.rows.resize(groups.size() * per_group);

    auto run_group = [&](std::size_t g) {
        const Group& grp = groups[g];
        SweepRow* rows = &result.rows[g * per_group];
        for (std::size_t s = 0; s < per_group; ++s) {
            rows[s].d_act_km = grp.d;
            rows[s].r_fault_ohm = grp.r;
            rows[s].fs_hz = grp.fs;
            rows[s].snr_db = spec.snr_db;
            rows[s].seed = spec.seeds[s];
        }
        DischargeTrace clean;
        try {
            clean = simulate_discharge(line, FaultScenario{grp.d, grp.r, {}}, ladder, grp.fs);
        } catch (const Error& e) {
            for (std::size_t s = 0; s < per_group; ++s) rows[s].error = describe(e.with_stage("simulate_discharge"));
            return;
        }
        LocateOptions opts = base;
        opts.model = result.model;
        opts.d_act_km = grp.d;
        for (std::size_t s = 0; s < per_group; ++s) {
            try {
                const DischargeTrace trace = add_noise(clean, spec.snr_db, spec.seeds[s]);
                rows[s].estimate = locate(trace, line, opts);
            } catch (const Error& e) {
                rows[s].error = describe(e);
            }
        }
    };

    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, groups.size()));
    if (workers <= 1) {
        for (std::size_t g = 0; g < groups.size(); ++g) run_group(g);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t g = next++; g < groups.size(); g = next++) run_group(g);
            });
        }
    }

    std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.d_act_km, a.r_fault_ohm, a.fs_hz, a.seed) <
               std::tie(b.d_act_km, b.r_fault_ohm, b.fs_hz, b.seed);
    });
    result.summary = summarize(result.rows);
    return result;
}

SweepSummary summarize(std::span<const SweepRow> rows) {
    SweepSummary summary;
    summary.rows = rows.size();
    double eps_sum = 0.0;
    std::size_t eps_count = 0;
    std::map<std::tuple<double, double, double>, ScenarioSpread> spreads;
    for (const auto& row : rows) {
        if (!row.estimate) {
            ++summary.errors;
            continue;
        }
        const auto& est = *row.estimate;
        summary.min_r_squared = std::min(summary.min_r_squared.value_or(std::numeric_limits<double>::infinity()), est.r_squared);
        if (!est.epsilon_pct) continue;
        const double eps = *est.epsilon_pct;
        summary.max_epsilon_pct = std::max(summary.max_epsilon_pct.value_or(-1.0), eps);
        eps_sum += eps;
        ++eps_count;
        auto [it, fresh] = spreads.try_emplace({row.d_act_km, row.r_fault_ohm, row.fs_hz},
                                               ScenarioSpread{row.d_act_km, row.r_fault_ohm, row.fs_hz, 0, eps, eps});
        auto& sp = it->second;
        ++sp.count;
        sp.epsilon_min = std::min(sp.epsilon_min, eps);
        sp.epsilon_max = std::max(sp.epsilon_max, eps);
    }
    if (eps_count > 0) summary.mean_epsilon_pct = eps_sum / static_cast<double>(eps_count);
    for (auto& [key, sp] : spreads) summary.spreads.push_back(sp);
    return summary;
}

std::string estimate_csv_header() {
    return "d_act_km,r_fault_ohm,fs_hz,snr_db,seed,alpha_1ps,f_d_hz,d_cal_km,epsilon_pct,r_squared,model";
}

std::string estimate_csv_row(std::optional<double> d_act_km, std::optional<double> r_fault_ohm, double fs_hz,
                             std::optional<double> snr_db, std::uint64_t seed, const LocationEstimate& est) {
    return fmt::format("{},{},{:g},{},{},{:.6f},{:.6f},{:.6f},{},{:.6f},{}", opt_num(d_act_km), opt_num(r_fault_ohm),
                       fs_hz, opt_num(snr_db), seed, est.alpha, est.f_d_hz(), est.d_cal_km,
                       est.epsilon_pct ? fmt::format("{:.6f}", *est.epsilon_pct) : std::string{}, est.r_squared,
                       to_string(est.model_used.kind));
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << estimate_csv_header() << ",status\n";
    for (const auto& row : result.rows) {
        if (row.estimate) {
            out << estimate_csv_row(row.d_act_km, row.r_fault_ohm, row.fs_hz, row.snr_db, row.seed, *row.estimate)
                << ",ok\n";
        } else {
            fmt::print(out, "{:g},{:g},{:g},{},{},,,,,,{},{}\n", row.d_act_km, row.r_fault_ohm, row.fs_hz,
                       opt_num(row.snr_db), row.seed, to_string(result.model.kind), row.error);
        }
    }
    const auto& s = result.summary;
    fmt::print(out, "# model={} calibration_factor={:.9f}\n", to_string(result.model.kind),
               result.model.calibration_factor);
    fmt::print(out, "# rows={} errors={}\n", s.rows, s.errors);
    fmt::print(out, "# max_epsilon_pct={}\n", s.max_epsilon_pct ? fmt::format("{:.6f}", *s.max_epsilon_pct) : "");
    fmt::print(out, "# mean_epsilon_pct={}\n", s.mean_epsilon_pct ? fmt::format("{:.6f}", *s.mean_epsilon_pct) : "");
    fmt::print(out, "# min_r_squared={}\n", s.min_r_squared ? fmt::format("{:.6f}", *s.min_r_squared) : "");
    for (const auto& sp : s.spreads) {
        if (sp.count < 2) continue;
        fmt::print(out, "# spread d_act_km={:g} r_fault_ohm={:g} fs_hz={:g} n={} epsilon_min={:.6f} epsilon_max={:.6f}\n",
                   sp.d_act_km, sp.r_fault_ohm, sp.fs_hz, sp.count, sp.epsilon_min, sp.epsilon_max);
    }
}

void write_sweep_pretty(std::ostream& out, const SweepResult& result) {
    fmt::print(out, "{:>9} {:>9} {:>9} {:>6} {:>5} {:>10} {:>10} {:>10} {:>9} {:>7}  {}\n", "d_act_km", "r_fault", "fs_hz",
               "snr_db", "seed", "alpha", "f_d_hz", "d_cal_km", "eps_pct", "R2", "status");
    for (const auto& row : result.rows) {
        const std::string snr = row.snr_db ? fmt::format("{:g}", *row.snr_db) : "-";
        if (row.estimate) {
            const auto& e = *row.estimate;
            fmt::print(out, "{:>9g} {:>9g} {:>9g} {:>6} {:>5} {:>10.3f} {:>10.3f} {:>10.3f} {:>9.4f} {:>7.4f}  ok\n",
                       row.d_act_km, row.r_fault_ohm, row.fs_hz, snr, row.seed, e.alpha, e.f_d_hz(), e.d_cal_km,
                       e.epsilon_pct.value_or(0.0), e.r_squared);
        } else {
            fmt::print(out, "{:>9g} {:>9g} {:>9g} {:>6} {:>5} {:>10} {:>10} {:>10} {:>9} {:>7}  {}\n", row.d_act_km,
                       row.r_fault_ohm, row.fs_hz, snr, row.seed, "-", "-", "-", "-", "-", row.error);
        }
    }
    const auto& s = result.summary;
    fmt::print(out, "\nrows {}  errors {}  max eps {}  mean eps {}  min R2 {}\n", s.rows, s.errors,
               s.max_epsilon_pct ? fmt::format("{:.4f}%", *s.max_epsilon_pct) : "-",
               s.mean_epsilon_pct ? fmt::format("{:.4f}%", *s.mean_epsilon_pct) : "-",
               s.min_r_squared ? fmt::format("{:.4f}", *s.min_r_squared) : "-");
}

}  // namespace dcfault
