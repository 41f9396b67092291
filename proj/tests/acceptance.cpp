// Acceptance runner. `dcfault_acceptance [N ...]` runs the listed criteria
// (all of them by default), prints one PASS/FAIL line each and exits non-zero
// if any selected criterion failed.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcfault/locator.hpp"
#include "dcfault/sweep.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace dcfault;
using oracle::kTwoPi;

namespace {

struct Verdict {
    bool pass = false;
    std::string summary;
};

const std::vector<double> kDistances{50, 150, 200, 600, 750};
const std::vector<double> kResistances{0.01, 2, 5, 10, 50, 100, 200};
const std::vector<double> kProbes{100, 400, 800};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string describe(const Error& e) {
    std::string s(to_string(e.kind()));
    if (!e.stage().empty()) s += " at stage " + e.stage();
    return s;
}

/// QuarterWave model calibrated on the default 200-segment ladder.
DistanceModel calibrated_model(const LineParameters& line, double fs) {
    CalibrationOptions opts;
    opts.model = DistanceModelKind::QuarterWave;
    opts.fs = fs;
    const double k = calibrate(line, kProbes, LadderOptions{}, opts).factor;
    fmt::print("    calibration factor {:.6f} (quarter-wave, probes 100/400/800 km, fs {:g} Hz)\n", k, fs);
    return {DistanceModelKind::QuarterWave, k};
}

Verdict closed_form_recovery() {
    const auto start = std::chrono::steady_clock::now();
    const LineParameters line;
    const DistanceModel lumped{};
    oracle::Gen gen(20240601);
    double worst_a = 0, worst_f = 0, worst_d = 0;
    int failures = 0, generated = 0;
    while (generated < 50) {
        // Draw a distance and alpha, keep the pair if the implied f_d and zeta are in range.
        const double d = gen.uniform(10.0, 1000.0);
        const double alpha = gen.uniform(10.0, 500.0);
        const double w0 = resonance_frequency(d, line, lumped);
        if (alpha >= 0.3 * w0) continue;
        const double wd = std::sqrt(w0 * w0 - alpha * alpha);
        const double fd = wd / kTwoPi;
        if (fd < 50.0 || fd > 2000.0) continue;
        ++generated;
        // Zero current at the isolation instant: the sine term only.
        const auto tr = closed_form_discharge(alpha, wd, 0.0, 1.0, 10e3, 0.5);
        LocateOptions opts;
        opts.d_act_km = d;
        try {
            const LocationEstimate est = locate(tr, line, opts);
            const double ea = oracle::relative(est.alpha, alpha);
            const double ef = oracle::relative(est.omega_d, wd);
            const double ed = oracle::relative(est.d_cal_km, d);
            worst_a = std::max(worst_a, ea);
            worst_f = std::max(worst_f, ef);
            worst_d = std::max(worst_d, ed);
            if (ea > 0.02 || ef > 0.01 || ed > 0.01) {
                ++failures;
                fmt::print("    miss: d={:.1f} km alpha={:.1f} f_d={:.1f} Hz -> alpha err {:.3f} % f_d err {:.3f} % d err {:.3f} %\n",
                           d, alpha, fd, 100 * ea, 100 * ef, 100 * ed);
            }
        } catch (const Error& e) {
            ++failures;
            fmt::print("    miss: d={:.1f} km alpha={:.1f} f_d={:.1f} Hz -> {}\n", d, alpha, fd, e.what());
        }
    }
    const double t = seconds_since(start);
    return {failures == 0 && t < 5.0,
            fmt::format("50 signals, {} outside tolerance; worst alpha {:.3f} % (<=2 %), f_d {:.3f} % (<=1 %), d_cal "
                        "{:.3f} % (<=1 %); {:.2f} s (<5 s)",
                        failures, 100 * worst_a, 100 * worst_f, 100 * worst_d, t)};
}

Verdict simulator_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const LineParameters line;
    double worst = 0.0;
    std::string where;
    for (double d : {50.0, 200.0, 750.0}) {
        for (double rf : {0.01, 10.0, 200.0}) {
            LadderOptions opts;
            opts.n_segments = 1;
            opts.duration = 0.2;
            const double fs = 100e3;
            const auto tr = simulate_discharge(line, FaultScenario{d, rf, {}}, opts, fs);
            const double R = line.r_per_km * d + rf;
            const double L = line.l_per_km * d;
            const double C = line.c_per_km * d;
            const double alpha = R / (2.0 * L);
            const double wd = std::sqrt(1.0 / (L * C) - alpha * alpha);
            const double d2 = line.pole_voltage / (L * wd);
            const auto n = static_cast<std::size_t>(5.0 * kTwoPi / wd * fs);
            std::vector<double> diff(n), ref(n);
            for (std::size_t k = 0; k < n; ++k) {
                ref[k] = oracle::damped(alpha, wd, 0.0, d2, static_cast<double>(k) / fs);
                diff[k] = tr.samples[k] - ref[k];
            }
            const double err = oracle::rms(diff) / oracle::rms(ref);
            if (err > worst) {
                worst = err;
                where = fmt::format("{:g} km / {:g} ohm", d, rf);
            }
        }
    }
    const double t = seconds_since(start);
    return {worst <= 0.01 && t < 10.0,
            fmt::format("worst relative RMS {:.4f} % at {} (<=1 %); {:.2f} s (<10 s)", 100 * worst, where, t)};
}

Verdict table_two() {
    const auto start = std::chrono::steady_clock::now();
    const LineParameters line;
    SweepSpec spec;
    spec.distances_km = kDistances;
    spec.resistances_ohm = kResistances;
    spec.model = {DistanceModelKind::QuarterWave, 1.0};
    spec.calibrate = true;
    spec.calibration_probes_km = kProbes;
    const SweepResult res = run_sweep(spec, line, LadderOptions{});
    fmt::print("    calibration factor {:.6f}\n", res.model.calibration_factor);
    int over = 0, low_r2 = 0, rejected = 0;
    for (const auto& row : res.rows) {
        if (!row.estimate) {
            ++rejected;
            fmt::print("    {:>4g} km {:>6g} ohm  rejected: {}\n", row.d_act_km, row.r_fault_ohm, row.error);
            continue;
        }
        const double eps = *row.estimate->epsilon_pct;
        const double r2 = row.estimate->r_squared;
        const bool bad = eps > 0.5 || r2 < 0.80;
        over += eps > 0.5;
        low_r2 += r2 < 0.80;
        fmt::print("    {:>4g} km {:>6g} ohm  eps {:8.4f} %  R2 {:.4f}{}\n", row.d_act_km, row.r_fault_ohm, eps, r2,
                   bad ? "  <-- out of bound" : "");
    }
    const double t = seconds_since(start);
    return {over == 0 && low_r2 == 0 && rejected == 0 && t < 60.0,
            fmt::format("{} rows: {} with eps > 0.5 %, {} with R2 < 0.80, {} rejected; max eps {:.4f} %, min R2 {:.4f}; "
                        "{:.1f} s (<60 s)",
                        res.rows.size(), over, low_r2, rejected, res.summary.max_epsilon_pct.value_or(NAN),
                        res.summary.min_r_squared.value_or(NAN), t)};
}

struct NoisyRow {
    double d;
    double r;
    std::uint64_t seed;
    std::optional<double> eps_clean;
    std::optional<double> eps_noisy;
    std::string error;
};

/// Clean and 30 dB estimates for the full sweep, five seeds per scenario.
std::vector<NoisyRow> noisy_sweep() {
    const LineParameters line;
    const DistanceModel model = calibrated_model(line, 10e3);
    std::vector<NoisyRow> rows;
    for (double d : kDistances) {
        for (double r : kResistances) {
            const auto clean = simulate_discharge(line, FaultScenario{d, r, {}}, LadderOptions{}, 10e3);
            LocateOptions opts;
            opts.model = model;
            opts.d_act_km = d;
            std::optional<double> eps_clean;
            std::string clean_error;
            try {
                eps_clean = locate(clean, line, opts).epsilon_pct;
            } catch (const Error& e) {
                clean_error = "clean: " + describe(e);
            }
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                NoisyRow row{d, r, seed, eps_clean, std::nullopt, clean_error};
                try {
                    row.eps_noisy = locate(add_noise(clean, 30.0, seed), line, opts).epsilon_pct;
                } catch (const Error& e) {
                    row.error += (row.error.empty() ? "" : "; ") + std::string("noisy: ") + describe(e);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

Verdict noise_robustness() {
    const auto start = std::chrono::steady_clock::now();
    const auto rows = noisy_sweep();
    double sum = 0.0, worst = 0.0;
    int pairs = 0, unpaired = 0;
    std::map<std::pair<double, double>, std::pair<double, int>> per_scenario;
    for (const auto& row : rows) {
        if (!row.eps_clean || !row.eps_noisy) {
            ++unpaired;
            continue;
        }
        const double dev = std::abs(*row.eps_noisy - *row.eps_clean);
        sum += dev;
        worst = std::max(worst, dev);
        ++pairs;
        auto& acc = per_scenario[{row.d, row.r}];
        acc.first += dev;
        ++acc.second;
    }
    for (const auto& [key, acc] : per_scenario) {
        fmt::print("    {:>4g} km {:>6g} ohm  mean |eps_noisy - eps_clean| {:.4f} pp over {} seeds\n", key.first,
                   key.second, acc.first / acc.second, acc.second);
    }
    const double mean = pairs > 0 ? sum / pairs : NAN;
    const double t = seconds_since(start);
    return {pairs > 0 && mean <= 0.05 && t < 300.0,
            fmt::format("{} clean/noisy pairs ({} rows without a pair): mean deviation {:.4f} pp (<=0.05), worst {:.4f} "
                        "pp; {:.1f} s (<300 s)",
                        pairs, unpaired, mean, worst, t)};
}

Verdict sampling_invariance() {
    const auto start = std::chrono::steady_clock::now();
    const LineParameters line;
    const DistanceModel model = calibrated_model(line, 10e3);
    const std::vector<std::pair<double, double>> scenarios{{50, 0.01}, {150, 2}, {600, 5},
                                                           {750, 0.01}, {50, 10}, {750, 10}};
    double worst = 0.0;
    int failures = 0;
    for (const auto& [d, r] : scenarios) {
        std::vector<double> eps;
        std::string line_out = fmt::format("    {:>4g} km {:>6g} ohm ", d, r);
        for (double fs : {10e3, 50e3, 100e3}) {
            LocateOptions opts;
            opts.model = model;
            opts.d_act_km = d;
            try {
                const auto tr = simulate_discharge(line, FaultScenario{d, r, {}}, LadderOptions{}, fs);
                eps.push_back(*locate(tr, line, opts).epsilon_pct);
                line_out += fmt::format(" {:g} kHz {:.4f} %", fs / 1e3, eps.back());
            } catch (const Error& e) {
                line_out += fmt::format(" {:g} kHz {}", fs / 1e3, describe(e));
            }
        }
        if (eps.size() != 3) {
            ++failures;
        } else {
            const double spread = *std::max_element(eps.begin(), eps.end()) - *std::min_element(eps.begin(), eps.end());
            worst = std::max(worst, spread);
            failures += spread > 0.05;
            line_out += fmt::format("  spread {:.4f} pp", spread);
        }
        fmt::print("{}\n", line_out);
    }
    const double t = seconds_since(start);
    return {failures == 0, fmt::format("6 scenarios x 10/50/100 kHz: {} out of bound, worst pairwise difference {:.4f} "
                                       "pp (<=0.05); {:.1f} s",
                                       failures, worst, t)};
}

Verdict regression_exactness() {
    const auto o = props::fit_exactness(1000, 6);
    return {o.failures == 0,
            fmt::format("{} exact log-linear series, {} with alpha error > 1e-9 or R2 != 1", o.cases, o.failures)};
}

Verdict invariant_suite() {
    struct Named {
        const char* name;
        props::Outcome outcome;
    };
    const std::vector<Named> all{
        {"passivity", props::passivity(100, 71)},
        {"fit scale invariance", props::fit_scale_invariance(200, 72)},
        {"fit time-shift invariance", props::fit_shift_invariance(200, 73)},
        {"fault_distance monotonicity", props::distance_monotonicity(500, 74)},
        {"fault_distance round trip", props::distance_round_trip(500, 75)},
        {"noise determinism", props::noise_determinism(100, 76)},
    };
    bool ok = true;
    std::string parts;
    for (const auto& n : all) {
        ok = ok && n.outcome.failures == 0 && n.outcome.cases >= 100;
        fmt::print("    {:<28} {:>4} cases, {} failures{}\n", n.name, n.outcome.cases, n.outcome.failures,
                   n.outcome.failures ? " (" + n.outcome.first_failure + ")" : "");
        parts += fmt::format("{}{} {}/{}", parts.empty() ? "" : ", ", n.name, n.outcome.cases - n.outcome.failures,
                             n.outcome.cases);
    }
    return {ok, parts};
}

Verdict worst_case_location() {
    const auto rows = noisy_sweep();
    const NoisyRow* worst = nullptr;
    for (const auto& row : rows) {
        if (row.eps_noisy && (worst == nullptr || *row.eps_noisy > *worst->eps_noisy)) worst = &row;
    }
    if (worst == nullptr) return {false, "no accepted rows"};
    const bool ok = worst->d >= 600.0 && worst->r == 200.0;
    return {ok, fmt::format("worst noisy row {:g} km / {:g} ohm / seed {} with eps {:.4f} % (want d >= 600 km and "
                            "r_fault = 200 ohm)",
                            worst->d, worst->r, worst->seed, *worst->eps_noisy)};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "closed-form recovery", closed_form_recovery},
        {2, "simulator oracle gate", simulator_oracle},
        {3, "clean distance/resistance sweep", table_two},
        {4, "noise robustness", noise_robustness},
        {5, "sampling-frequency invariance", sampling_invariance},
        {6, "regression exactness", regression_exactness},
        {7, "invariant suite", invariant_suite},
        {8, "worst-case location", worst_case_location},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& c : criteria) selected.push_back(c.id);

    int failed = 0;
    for (int id : selected) {
        const auto it = std::find_if(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == id; });
        if (it == criteria.end()) {
            fmt::print(stderr, "unknown criterion {}\n", id);
            return 2;
        }
        fmt::print("criterion {} ({}):\n", it->id, it->title);
        Verdict v;
        try {
            v = it->run();
        } catch (const std::exception& e) {
            v = {false, std::string("aborted: ") + e.what()};
        }
        fmt::print("[{}] criterion {}: {}\n", v.pass ? "PASS" : "FAIL", it->id, v.summary);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
