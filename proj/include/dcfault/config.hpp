#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "dcfault/locator.hpp"
#include "dcfault/sweep.hpp"

namespace dcfault {

struct PipelineConfig {
    double fs_hz = 10e3;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    LocateOptions locate{};
};

/// Everything a CLI run needs. Only `line` is always present.
struct AppConfig {
    LineParameters line{};
    std::optional<FaultScenario> scenario;
    LadderOptions ladder{};
    PipelineConfig pipeline{};
    std::optional<SweepSpec> sweep;
};

/// Parses the JSON configuration. Required keys: line.r_per_km, line.l_per_km,
/// line.c_per_km, line.length_km; a `scenario` block, when present, requires
/// d_act_km and r_fault_ohm. Missing or mistyped keys raise MalformedInput
/// naming the dotted key; out-of-range values raise InvalidParameter.
[[nodiscard]] AppConfig parse_config(std::string_view json_text);
[[nodiscard]] AppConfig load_config(const std::filesystem::path& path);

}  // namespace dcfault
