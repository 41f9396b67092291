#include "dcfault/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

const json* find(const json& block, const char* key) {
    if (!block.is_object()) return nullptr;
    const auto it = block.find(key);
    return it == block.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& block, const std::string& prefix, const char* key) {
    const json* v = find(block, key);
    if (v == nullptr) config_error("missing key " + prefix + key);
    if (!v->is_number()) config_error("key " + prefix + key + " must be a number");
    return v->get<double>();
}

double number_or(const json& block, const std::string& prefix, const char* key, double fallback) {
    return find(block, key) == nullptr ? fallback : number(block, prefix, key);
}

std::optional<double> optional_number(const json& block, const std::string& prefix, const char* key) {
    if (find(block, key) == nullptr) return std::nullopt;
    return number(block, prefix, key);
}

std::vector<double> number_list(const json& block, const std::string& prefix, const char* key) {
    const json* v = find(block, key);
    if (v == nullptr) config_error("missing key " + prefix + key);
    if (!v->is_array()) config_error("key " + prefix + key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : *v) {
        if (!item.is_number()) config_error("key " + prefix + key + " must be a list of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

std::uint64_t unsigned_value(const json& v, const std::string& name) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        config_error("key " + name + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& block, const std::string& prefix, const char* key, std::string fallback) {
    const json* v = find(block, key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) config_error("key " + prefix + key + " must be a string");
    return v->get<std::string>();
}

const json& child(const json& root, const char* key) {
    static const json empty = json::object();
    const json* v = find(root, key);
    if (v == nullptr) return empty;
    if (!v->is_object()) config_error(std::string("key ") + key + " must be an object");
    return *v;
}

}  // namespace

AppConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) config_error("config root must be an object");

    AppConfig cfg;
    const json& line = child(root, "line");
    if (find(root, "line") == nullptr) config_error("missing key line");
    cfg.line.r_per_km = number(line, "line.", "r_per_km");
    cfg.line.l_per_km = number(line, "line.", "l_per_km");
    cfg.line.c_per_km = number(line, "line.", "c_per_km");
    cfg.line.length_km = number(line, "line.", "length_km");
    cfg.line.pole_voltage = number_or(line, "line.", "pole_voltage_v", cfg.line.pole_voltage);
    validate(cfg.line);

    if (find(root, "scenario") != nullptr) {
        const json& sc = child(root, "scenario");
        FaultScenario scenario;
        scenario.d_act_km = number(sc, "scenario.", "d_act_km");
        scenario.r_fault = number(sc, "scenario.", "r_fault_ohm");
        const double t_iso = number_or(sc, "scenario.", "t_isolated_s", 0.0);
        scenario.isolation.t_isolated = t_iso;
        scenario.isolation.t_detect = number_or(sc, "scenario.", "t_detect_s", t_iso);
        scenario.isolation.t_fault = number_or(sc, "scenario.", "t_fault_s", scenario.isolation.t_detect);
        cfg.scenario = validate(cfg.line, scenario).scenario;
    }

    const json& ladder = child(root, "ladder");
    if (const json* seg = find(ladder, "segments")) {
        const auto n = unsigned_value(*seg, "ladder.segments");
        if (n < 1) throw_invalid("ladder.segments", ">= 1");
        cfg.ladder.n_segments = static_cast<std::size_t>(n);
    }
    cfg.ladder.internal_step = number_or(ladder, "ladder.", "internal_step_s", cfg.ladder.internal_step);
    cfg.ladder.duration = number_or(ladder, "ladder.", "duration_s", cfg.ladder.duration);
    const std::string probe = text(ladder, "ladder.", "probe", "fault");
    if (probe == "fault") {
        cfg.ladder.probe = CurrentProbe::FaultPath;
    } else if (probe == "terminal") {
        cfg.ladder.probe = CurrentProbe::Terminal;
    } else {
        config_error("key ladder.probe must be 'fault' or 'terminal'");
    }
    if (find(ladder, "initial_voltages_v") != nullptr) {
        CustomProfile custom;
        custom.node_voltages = number_list(ladder, "ladder.", "initial_voltages_v");
        if (find(ladder, "initial_currents_a") != nullptr) {
            custom.branch_currents = number_list(ladder, "ladder.", "initial_currents_a");
        }
        cfg.ladder.initial_profile = std::move(custom);
    }

    const json& pipe = child(root, "pipeline");
    cfg.pipeline.fs_hz = number_or(pipe, "pipeline.", "fs_hz", cfg.pipeline.fs_hz);
    cfg.pipeline.snr_db = optional_number(pipe, "pipeline.", "snr_db");
    if (const json* seed = find(pipe, "seed")) cfg.pipeline.seed = unsigned_value(*seed, "pipeline.seed");
    auto& loc = cfg.pipeline.locate;
    loc.peaks.window = number_or(pipe, "pipeline.", "window_ms", loc.peaks.window * 1e3) * 1e-3;
    loc.peaks.min_magnitude_fraction = number_or(pipe, "pipeline.", "min_peak_frac", loc.peaks.min_magnitude_fraction);
    loc.model.kind = parse_distance_model(text(pipe, "pipeline.", "model", std::string(to_string(loc.model.kind))));
    loc.model.calibration_factor = number_or(pipe, "pipeline.", "calibration_factor", 1.0);
    if (const json* comp = find(pipe, "compensate_damping")) {
        if (!comp->is_boolean()) config_error("key pipeline.compensate_damping must be a boolean");
        loc.compensate_damping = comp->get<bool>();
    }
    validate(loc.model);

    if (find(root, "sweep") != nullptr) {
        const json& sw = child(root, "sweep");
        SweepSpec spec;
        spec.distances_km = number_list(sw, "sweep.", "distances_km");
        spec.resistances_ohm = number_list(sw, "sweep.", "resistances_ohm");
        if (find(sw, "sampling_rates_hz") != nullptr) {
            spec.sampling_rates_hz = number_list(sw, "sweep.", "sampling_rates_hz");
        } else {
            spec.sampling_rates_hz = {cfg.pipeline.fs_hz};
        }
        spec.snr_db = optional_number(sw, "sweep.", "snr_db");
        if (const json* seeds = find(sw, "seeds")) {
            if (!seeds->is_array()) config_error("key sweep.seeds must be a list of integers");
            spec.seeds.clear();
            for (const auto& s : *seeds) spec.seeds.push_back(unsigned_value(s, "sweep.seeds"));
        }
        spec.model = loc.model;
        if (find(sw, "model") != nullptr) spec.model.kind = parse_distance_model(text(sw, "sweep.", "model", ""));
        if (const json* cal = find(sw, "calibrate")) {
            if (!cal->is_boolean()) config_error("key sweep.calibrate must be a boolean");
            spec.calibrate = cal->get<bool>();
        }
        if (find(sw, "calibration_probes_km") != nullptr) {
            spec.calibration_probes_km = number_list(sw, "sweep.", "calibration_probes_km");
        }
        cfg.sweep = std::move(spec);
    }
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace dcfault
