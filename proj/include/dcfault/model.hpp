#pragma once

#include <string_view>

namespace dcfault {

/// Per-unit-length parameters of the dc line. Units: ohm/km, H/km, F/km, km, V.
struct LineParameters {
    double r_per_km = 0.03206;
    double l_per_km = 0.86e-3;
    double c_per_km = 13.4e-9;
    double length_km = 1000.0;
    double pole_voltage = 320e3;

    /// sqrt(l*c), the one-way travel time per km (s/km).
    [[nodiscard]] double travel_time_per_km() const;
    /// 1/sqrt(l*c) in km/s.
    [[nodiscard]] double surge_velocity() const;
    /// sqrt(l/c) in ohm.
    [[nodiscard]] double surge_impedance() const;

    friend bool operator==(const LineParameters&, const LineParameters&) = default;
};

/// Fault inception, detection and completed interruption instants (s).
struct BreakerTimeline {
    double t_fault = 0.0;
    double t_detect = 0.0;
    double t_isolated = 0.0;

    friend bool operator==(const BreakerTimeline&, const BreakerTimeline&) = default;
};

struct FaultScenario {
    double d_act_km = 50.0;
    double r_fault = 0.01;
    BreakerTimeline isolation{};

    friend bool operator==(const FaultScenario&, const FaultScenario&) = default;
};

enum class DistanceModelKind { AsPrinted, LumpedSqrt, QuarterWave };

struct DistanceModel {
    DistanceModelKind kind = DistanceModelKind::LumpedSqrt;
    double calibration_factor = 1.0;

    friend bool operator==(const DistanceModel&, const DistanceModel&) = default;
};

[[nodiscard]] std::string_view to_string(DistanceModelKind kind) noexcept;
/// Accepts the CLI spellings `as-printed`, `lumped-sqrt`, `quarter-wave`.
[[nodiscard]] DistanceModelKind parse_distance_model(std::string_view name);

struct ValidatedConfig {
    LineParameters line;
    FaultScenario scenario;

    friend bool operator==(const ValidatedConfig&, const ValidatedConfig&) = default;
};

void validate(const LineParameters& line);
void validate(const BreakerTimeline& timeline);
void validate(const DistanceModel& model);

/// Checks every invariant of the pair and returns it unchanged.
/// Throws Error(InvalidParameter) naming the offending field.
[[nodiscard]] ValidatedConfig validate(const LineParameters& line, const FaultScenario& scenario);

}  // namespace dcfault
