#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dcfault/error.hpp"
#include "dcfault/locator.hpp"
#include "dcfault/trace_io.hpp"

namespace py = pybind11;
using namespace dcfault;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

DischargeTrace make_trace(const py::array_t<double, py::array::c_style | py::array::forcecast>& samples, double fs,
                          double t0) {
    if (samples.ndim() != 1) throw py::value_error("samples must be one-dimensional");
    DischargeTrace tr{std::vector<double>(samples.data(), samples.data() + samples.size()), fs, t0};
    validate(tr);
    return tr;
}

}  // namespace

PYBIND11_MODULE(_dcfault, m) {
    m.doc() = "Single-ended fault location on an isolated HVdc line segment";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::exception<Error>(m, "DcfaultError", PyExc_RuntimeError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& type = error_type.get_stored();
            py::object inst = type(py::str(e.what()));
            inst.attr("kind") = py::str(std::string(to_string(e.kind())));
            inst.attr("stage") = py::str(e.stage());
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    py::class_<LineParameters>(m, "LineParameters")
        .def(py::init<>())
        .def(py::init([](double r, double l, double c, double length, double v) {
                 return LineParameters{r, l, c, length, v};
             }),
             py::arg("r_per_km"), py::arg("l_per_km"), py::arg("c_per_km"), py::arg("length_km"),
             py::arg("pole_voltage") = 320e3)
        .def_readwrite("r_per_km", &LineParameters::r_per_km)
        .def_readwrite("l_per_km", &LineParameters::l_per_km)
        .def_readwrite("c_per_km", &LineParameters::c_per_km)
        .def_readwrite("length_km", &LineParameters::length_km)
        .def_readwrite("pole_voltage", &LineParameters::pole_voltage)
        .def("surge_velocity", &LineParameters::surge_velocity)
        .def("surge_impedance", &LineParameters::surge_impedance)
        .def("validate", [](const LineParameters& l) { validate(l); });

    py::class_<BreakerTimeline>(m, "BreakerTimeline")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("t_fault"), py::arg("t_detect"), py::arg("t_isolated"))
        .def_readwrite("t_fault", &BreakerTimeline::t_fault)
        .def_readwrite("t_detect", &BreakerTimeline::t_detect)
        .def_readwrite("t_isolated", &BreakerTimeline::t_isolated);

    py::class_<FaultScenario>(m, "FaultScenario")
        .def(py::init([](double d, double r, const BreakerTimeline& t) { return FaultScenario{d, r, t}; }),
             py::arg("d_act_km") = 50.0, py::arg("r_fault") = 0.01, py::arg("isolation") = BreakerTimeline{})
        .def_readwrite("d_act_km", &FaultScenario::d_act_km)
        .def_readwrite("r_fault", &FaultScenario::r_fault)
        .def_readwrite("isolation", &FaultScenario::isolation);

    py::enum_<DistanceModelKind>(m, "DistanceModelKind")
        .value("AS_PRINTED", DistanceModelKind::AsPrinted)
        .value("LUMPED_SQRT", DistanceModelKind::LumpedSqrt)
        .value("QUARTER_WAVE", DistanceModelKind::QuarterWave);

    py::class_<DistanceModel>(m, "DistanceModel")
        .def(py::init([](DistanceModelKind k, double f) { return DistanceModel{k, f}; }),
             py::arg("kind") = DistanceModelKind::LumpedSqrt, py::arg("calibration_factor") = 1.0)
        .def_readwrite("kind", &DistanceModel::kind)
        .def_readwrite("calibration_factor", &DistanceModel::calibration_factor);

    py::enum_<CurrentProbe>(m, "CurrentProbe")
        .value("FAULT_PATH", CurrentProbe::FaultPath)
        .value("TERMINAL", CurrentProbe::Terminal);

    py::class_<LadderOptions>(m, "LadderOptions")
        .def(py::init<>())
        .def_readwrite("n_segments", &LadderOptions::n_segments)
        .def_readwrite("internal_step", &LadderOptions::internal_step)
        .def_readwrite("duration", &LadderOptions::duration)
        .def_readwrite("probe", &LadderOptions::probe)
        .def("set_initial_profile",
             [](LadderOptions& o, std::vector<double> voltages, std::vector<double> currents) {
                 o.initial_profile = CustomProfile{std::move(voltages), std::move(currents)};
             },
             py::arg("node_voltages"), py::arg("branch_currents") = std::vector<double>{})
        .def("set_uniform_profile", [](LadderOptions& o) { o.initial_profile = UniformProfile{}; });

    py::class_<DischargeTrace>(m, "DischargeTrace")
        .def(py::init(&make_trace), py::arg("samples"), py::arg("fs"), py::arg("t0") = 0.0)
        .def_property_readonly("samples", [](const DischargeTrace& t) { return as_array(t.samples); })
        .def_property_readonly("times", [](const DischargeTrace& t) {
            std::vector<double> ts(t.size());
            for (std::size_t n = 0; n < ts.size(); ++n) ts[n] = t.time(n);
            return as_array(ts);
        })
        .def_readonly("fs", &DischargeTrace::fs)
        .def_readonly("t0", &DischargeTrace::t0)
        .def("__len__", &DischargeTrace::size);

    py::class_<PeakSeries>(m, "PeakSeries")
        .def_property_readonly("times",
                               [](const PeakSeries& p) {
                                   std::vector<double> v;
                                   for (const auto& pt : p.points) v.push_back(pt.t);
                                   return as_array(v);
                               })
        .def_property_readonly("magnitudes",
                               [](const PeakSeries& p) {
                                   std::vector<double> v;
                                   for (const auto& pt : p.points) v.push_back(pt.magnitude);
                                   return as_array(v);
                               })
        .def("__len__", [](const PeakSeries& p) { return p.points.size(); });

    py::class_<PeakOptions>(m, "PeakOptions")
        .def(py::init<>())
        .def_readwrite("window", &PeakOptions::window)
        .def_readwrite("min_magnitude_fraction", &PeakOptions::min_magnitude_fraction)
        .def_readwrite("refine", &PeakOptions::refine);

    py::class_<AttenuationFit>(m, "AttenuationFit")
        .def_readonly("alpha", &AttenuationFit::alpha)
        .def_readonly("intercept", &AttenuationFit::intercept)
        .def_readonly("r_squared", &AttenuationFit::r_squared);

    py::class_<SpectralEstimate>(m, "SpectralEstimate")
        .def_readonly("omega_d", &SpectralEstimate::omega_d)
        .def_readonly("bin_resolution", &SpectralEstimate::bin_resolution)
        .def_readonly("peak_amplitude", &SpectralEstimate::peak_amplitude);

    py::class_<LocationEstimate>(m, "LocationEstimate")
        .def_readonly("alpha", &LocationEstimate::alpha)
        .def_readonly("omega_d", &LocationEstimate::omega_d)
        .def_readonly("omega_0", &LocationEstimate::omega_0)
        .def_readonly("zeta", &LocationEstimate::zeta)
        .def_readonly("d_cal_km", &LocationEstimate::d_cal_km)
        .def_readonly("epsilon_pct", &LocationEstimate::epsilon_pct)
        .def_readonly("r_squared", &LocationEstimate::r_squared)
        .def_readonly("peak_count", &LocationEstimate::peak_count)
        .def_readonly("model_used", &LocationEstimate::model_used)
        .def_property_readonly("f_d_hz", &LocationEstimate::f_d_hz);

    py::class_<LocateOptions>(m, "LocateOptions")
        .def(py::init<>())
        .def_readwrite("peaks", &LocateOptions::peaks)
        .def_readwrite("model", &LocateOptions::model)
        .def_readwrite("compensate_damping", &LocateOptions::compensate_damping)
        .def_readwrite("d_act_km", &LocateOptions::d_act_km)
        .def_readwrite("t_isolated", &LocateOptions::t_isolated);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("factor", &CalibrationResult::factor)
        .def_readonly("residual_spread", &CalibrationResult::residual_spread)
        .def_readonly("probes_km", &CalibrationResult::probes_km)
        .def_readonly("raw_estimates_km", &CalibrationResult::raw_estimates_km);

    m.def("closed_form_discharge", &closed_form_discharge, py::arg("alpha"), py::arg("omega_d"), py::arg("d1"),
          py::arg("d2"), py::arg("fs"), py::arg("duration"));
    m.def("simulate_discharge", &simulate_discharge, py::arg("line"), py::arg("scenario"),
          py::arg("options") = LadderOptions{}, py::arg("fs_out") = 10e3, py::call_guard<py::gil_scoped_release>());
    m.def("add_noise", &add_noise, py::arg("trace"), py::arg("snr_db"), py::arg("seed"));
    m.def("extract_envelope_peaks", &extract_envelope_peaks, py::arg("trace"), py::arg("options") = PeakOptions{});
    m.def("fit_attenuation", &fit_attenuation, py::arg("peaks"));
    m.def("dominant_frequency", [](const DischargeTrace& t) { return dominant_frequency(t); }, py::arg("trace"));
    m.def("damping_compensated_frequency", &damping_compensated_frequency, py::arg("trace"), py::arg("fit"),
          py::arg("min_magnitude_fraction") = 0.02);
    m.def("resonance_frequency", &resonance_frequency, py::arg("distance_km"), py::arg("line"), py::arg("model"));
    m.def("fault_distance", &fault_distance, py::arg("alpha"), py::arg("omega_d"), py::arg("line"), py::arg("model"));
    m.def("location_error", &location_error, py::arg("d_act_km"), py::arg("d_cal_km"), py::arg("line_length_km"));
    m.def("locate", &locate, py::arg("trace"), py::arg("line"), py::arg("options") = LocateOptions{});
    m.def(
        "calibrate",
        [](const LineParameters& line, const std::vector<double>& probes, const LadderOptions& ladder,
           DistanceModelKind model, double fs) {
            CalibrationOptions opts;
            opts.model = model;
            opts.fs = fs;
            return calibrate(line, probes, ladder, opts);
        },
        py::arg("line"), py::arg("probes_km"), py::arg("ladder") = LadderOptions{},
        py::arg("model") = DistanceModelKind::LumpedSqrt, py::arg("fs") = 10e3, py::call_guard<py::gil_scoped_release>());
    m.def("save_trace", [](const std::string& path, const DischargeTrace& t) { save_trace(path, t); });
    m.def("load_trace", [](const std::string& path) { return load_trace(path); });
}
