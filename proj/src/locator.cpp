#include "dcfault/locator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

double LocationEstimate::f_d_hz() const noexcept { return omega_d / (2.0 * std::numbers::pi); }

double resonance_frequency(double distance_km, const LineParameters& line, const DistanceModel& model) {
    validate(line);
    validate(model);
    if (!(distance_km > 0.0) || !std::isfinite(distance_km)) throw_invalid("distance_km", "> 0");
    const double k = model.calibration_factor;
    const double lc = line.l_per_km * line.c_per_km;
    switch (model.kind) {
        case DistanceModelKind::AsPrinted: return std::sqrt(k / (distance_km * lc));
        case DistanceModelKind::LumpedSqrt: return k / (distance_km * std::sqrt(lc));
        case DistanceModelKind::QuarterWave: return k * std::numbers::pi / (2.0 * distance_km * std::sqrt(lc));
    }
    return 0.0;
}

double fault_distance(double alpha, double omega_d, const LineParameters& line, const DistanceModel& model) {
    validate(line);
    validate(model);
    if (!std::isfinite(alpha) || alpha < 0.0) throw_invalid("alpha", ">= 0");
    if (!std::isfinite(omega_d) || omega_d <= 0.0) throw_invalid("omega_d", "> 0");

    const double omega0_sq = omega_d * omega_d + alpha * alpha;
    const double omega0 = std::sqrt(omega0_sq);
    const double lc = line.l_per_km * line.c_per_km;
    double d = 0.0;
    switch (model.kind) {
        case DistanceModelKind::AsPrinted: d = 1.0 / (omega0_sq * lc); break;
        case DistanceModelKind::LumpedSqrt: d = 1.0 / (omega0 * std::sqrt(lc)); break;
        case DistanceModelKind::QuarterWave: d = std::numbers::pi / (2.0 * omega0 * std::sqrt(lc)); break;
    }
    d *= model.calibration_factor;
    if (d > 1.1 * line.length_km) {
        throw Error(ErrorKind::OutOfRange, "d_cal=" + std::to_string(d) + " km exceeds 110% of line length " +
                                               std::to_string(line.length_km) + " km");
    }
    return d;
}

double location_error(double d_act_km, double d_cal_km, double line_length_km) {
    return std::abs(d_act_km - d_cal_km) / line_length_km * 100.0;
}

namespace {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw e.with_stage(stage);
    }
}

}  // namespace

LocationEstimate locate(const DischargeTrace& trace, const LineParameters& line, const LocateOptions& options) {
    validate(line);
    validate(options.model);
    if (options.t_isolated && trace.t0 < *options.t_isolated) {
        throw Error(ErrorKind::InvalidParameter, "trace starts before breaker isolation", "locate");
    }

    const PeakSeries peaks = run_stage("extract_envelope_peaks", [&] { return extract_envelope_peaks(trace, options.peaks); });
    const AttenuationFit fit = run_stage("fit_attenuation", [&] { return fit_attenuation(peaks); });
    const SpectralEstimate spectrum = run_stage("dominant_frequency", [&] {
        return options.compensate_damping
                   ? damping_compensated_frequency(trace, fit, options.peaks.min_magnitude_fraction)
                   : dominant_frequency(trace);
    });
    const double d_cal = run_stage("fault_distance", [&] { return fault_distance(fit.alpha, spectrum.omega_d, line, options.model); });

    LocationEstimate est;
    est.alpha = fit.alpha;
    est.omega_d = spectrum.omega_d;
    est.omega_0 = std::hypot(spectrum.omega_d, fit.alpha);
    est.zeta = fit.alpha / est.omega_0;
    est.d_cal_km = d_cal;
    est.r_squared = fit.r_squared;
    est.peak_count = peaks.points.size();
    est.model_used = options.model;
    if (options.d_act_km) est.epsilon_pct = location_error(*options.d_act_km, d_cal, line.length_km);
    return est;
}

CalibrationResult calibrate(const LineParameters& line, std::span<const double> probes_km,
                            const LadderOptions& ladder, const CalibrationOptions& options) {
    validate(line);
    if (probes_km.size() < 2) {
        throw Error(ErrorKind::CalibrationUnstable, "need at least two probe distances");
    }
    CalibrationResult result;
    result.probes_km.assign(probes_km.begin(), probes_km.end());

    LocateOptions locate_opts = options.locate;
    locate_opts.model = DistanceModel{options.model, 1.0};
    locate_opts.d_act_km.reset();
    locate_opts.t_isolated.reset();

    double num = 0.0;
    double den = 0.0;
    for (double d : probes_km) {
        const FaultScenario scenario{d, options.r_fault, {}};
        const DischargeTrace trace = simulate_discharge(line, scenario, ladder, options.fs);
        // Uncalibrated estimates may overshoot the line (lumped-sqrt on a long ladder does).
        LineParameters unbounded = line;
        unbounded.length_km = 1e12;
        const LocationEstimate est = locate(trace, unbounded, locate_opts);
        result.raw_estimates_km.push_back(est.d_cal_km);
        num += d * est.d_cal_km;
        den += est.d_cal_km * est.d_cal_km;
    }
    result.factor = num / den;
    for (std::size_t i = 0; i < result.probes_km.size(); ++i) {
        const double rel = std::abs(result.factor * result.raw_estimates_km[i] / result.probes_km[i] - 1.0);
        result.residual_spread = std::max(result.residual_spread, rel);
    }
    if (result.residual_spread > 0.05) {
        throw Error(ErrorKind::CalibrationUnstable,
                    "residual spread " + std::to_string(100.0 * result.residual_spread) + "% exceeds 5%");
    }
    return result;
}

}  // namespace dcfault
