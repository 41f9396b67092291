#include "dcfault/model.hpp"

#include <cmath>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

double LineParameters::travel_time_per_km() const { return std::sqrt(l_per_km * c_per_km); }

double LineParameters::surge_velocity() const { return 1.0 / travel_time_per_km(); }

double LineParameters::surge_impedance() const { return std::sqrt(l_per_km / c_per_km); }

std::string_view to_string(DistanceModelKind kind) noexcept {
    switch (kind) {
        case DistanceModelKind::AsPrinted: return "as-printed";
        case DistanceModelKind::LumpedSqrt: return "lumped-sqrt";
        case DistanceModelKind::QuarterWave: return "quarter-wave";
    }
    return "unknown";
}

DistanceModelKind parse_distance_model(std::string_view name) {
    if (name == "as-printed") return DistanceModelKind::AsPrinted;
    if (name == "lumped-sqrt") return DistanceModelKind::LumpedSqrt;
    if (name == "quarter-wave") return DistanceModelKind::QuarterWave;
    throw Error(ErrorKind::InvalidParameter,
                "model must be one of as-printed|lumped-sqrt|quarter-wave, got '" +
                    std::string(name) + "'");
}

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const LineParameters& line) {
    if (!finite(line.r_per_km) || line.r_per_km < 0.0) throw_invalid("line.r_per_km", ">= 0");
    if (!finite(line.l_per_km) || line.l_per_km <= 0.0) throw_invalid("line.l_per_km", "> 0");
    if (!finite(line.c_per_km) || line.c_per_km <= 0.0) throw_invalid("line.c_per_km", "> 0");
    if (!finite(line.length_km) || line.length_km <= 0.0) throw_invalid("line.length_km", "> 0");
    if (!finite(line.pole_voltage)) throw_invalid("line.pole_voltage_v", "finite");
    const double v = line.surge_velocity();
    if (!finite(v) || v <= 0.0) throw_invalid("line.l_per_km*line.c_per_km", "finite positive surge velocity");
}

void validate(const BreakerTimeline& timeline) {
    if (!finite(timeline.t_fault) || !finite(timeline.t_detect) || !finite(timeline.t_isolated)) {
        throw_invalid("scenario.isolation", "finite timestamps");
    }
    if (timeline.t_detect < timeline.t_fault) throw_invalid("scenario.t_detect_s", ">= t_fault");
    if (timeline.t_isolated < timeline.t_detect) throw_invalid("scenario.t_isolated_s", ">= t_detect");
}

void validate(const DistanceModel& model) {
    if (!finite(model.calibration_factor) || model.calibration_factor <= 0.0) {
        throw_invalid("calibration_factor", "> 0");
    }
}

ValidatedConfig validate(const LineParameters& line, const FaultScenario& scenario) {
    validate(line);
    if (!finite(scenario.d_act_km) || scenario.d_act_km <= 0.0 || scenario.d_act_km > line.length_km) {
        throw_invalid("scenario.d_act_km", "0 < d_act <= line.length_km");
    }
    if (!finite(scenario.r_fault) || scenario.r_fault < 0.0) throw_invalid("scenario.r_fault_ohm", ">= 0");
    validate(scenario.isolation);
    return ValidatedConfig{line, scenario};
}

}  // namespace dcfault
