#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dcfault/dsp.hpp"
#include "dcfault/model.hpp"
#include "dcfault/transient.hpp"

namespace dcfault {

struct LocationEstimate {
    double alpha = 0.0;    ///< 1/s
    double omega_d = 0.0;  ///< rad/s
    double omega_0 = 0.0;  ///< rad/s, sqrt(omega_d^2 + alpha^2)
    double zeta = 0.0;     ///< alpha / omega_0
    double d_cal_km = 0.0;
    std::optional<double> epsilon_pct;  ///< set when the true distance is known
    double r_squared = 0.0;
    std::size_t peak_count = 0;
    DistanceModel model_used{};

    [[nodiscard]] double f_d_hz() const noexcept;
};

/// Undamped resonance a fault at `distance_km` produces under `model`
/// (the forward map that `fault_distance` inverts).
[[nodiscard]] double resonance_frequency(double distance_km, const LineParameters& line, const DistanceModel& model);

/// Inverts omega_0^2 = omega_d^2 + alpha^2 to a distance:
///   as-printed   1 / (omega_0^2 L C)
///   lumped-sqrt  1 / (omega_0 sqrt(L C))
///   quarter-wave pi / (2 omega_0 sqrt(L C))
/// times the model's calibration factor. Throws OutOfRange beyond 110 % of the line.
[[nodiscard]] double fault_distance(double alpha, double omega_d, const LineParameters& line,
                                    const DistanceModel& model);

/// |d_act - d_cal| as a percentage of the total line length.
[[nodiscard]] double location_error(double d_act_km, double d_cal_km, double line_length_km);

struct LocateOptions {
    PeakOptions peaks{};
    DistanceModel model{};
    /// Estimate omega_d on the decay-compensated trace (see damping_compensated_frequency).
    /// When false the raw trace spectrum is used.
    bool compensate_damping = true;
    /// Populates epsilon_pct when set.
    std::optional<double> d_act_km;
    /// When set, traces starting before this instant are rejected (breaker not yet open).
    std::optional<double> t_isolated;
};

/// Envelope peaks -> attenuation fit -> dominant frequency -> distance.
/// Errors carry the name of the stage that raised them.
[[nodiscard]] LocationEstimate locate(const DischargeTrace& trace, const LineParameters& line,
                                      const LocateOptions& options = {});

struct CalibrationOptions {
    DistanceModelKind model = DistanceModelKind::LumpedSqrt;
    double fs = 10e3;
    double r_fault = 0.01;
    LocateOptions locate{};
};

struct CalibrationResult {
    double factor = 1.0;
    /// max |factor * d_raw / d_probe - 1| over the probes.
    double residual_spread = 0.0;
    std::vector<double> probes_km;
    std::vector<double> raw_estimates_km;
};

/// Simulates a low-resistance fault at each probe distance, locates it with
/// factor 1 and returns the least-squares scale mapping estimates onto truth.
/// Throws CalibrationUnstable with fewer than two probes or a spread above 5 %.
[[nodiscard]] CalibrationResult calibrate(const LineParameters& line, std::span<const double> probes_km,
                                          const LadderOptions& ladder, const CalibrationOptions& options = {});

}  // namespace dcfault
