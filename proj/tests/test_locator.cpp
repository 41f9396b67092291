#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dcfault/locator.hpp"
#include "support.hpp"

using namespace dcfault;
using oracle::kTwoPi;

namespace {

LineParameters unit_line() {
    LineParameters line;
    line.l_per_km = 1.0e-3;
    line.c_per_km = 10e-9;
    return line;
}

constexpr DistanceModel kLumped{DistanceModelKind::LumpedSqrt, 1.0};

}  // namespace

TEST_CASE("location error is normalised to the line length") {
    CHECK(location_error(50.0, 50.0, 1000.0) == 0.0);
    CHECK(location_error(50.0, 50.07, 1000.0) == doctest::Approx(0.0070).epsilon(1e-9));
    CHECK(location_error(600.0, 600.387, 1000.0) == doctest::Approx(0.0387).epsilon(1e-9));
    CHECK(location_error(600.0, 599.613, 1000.0) == doctest::Approx(0.0387).epsilon(1e-9));
}

TEST_CASE("lumped inversion with zero damping") {
    CHECK(fault_distance(0.0, 3162.3, unit_line(), kLumped) == doctest::Approx(100.0).epsilon(1e-4));
}

TEST_CASE("lumped inversion with damping") {
    // omega_0 at 200 km is 1/(200 * 3.16228e-6) = 1581.14 rad/s.
    const double w0 = 1.0 / (200.0 * std::sqrt(1.0e-3 * 10e-9));
    const double wd = std::sqrt(w0 * w0 - 50.0 * 50.0);
    CHECK(wd == doctest::Approx(1580.35).epsilon(1e-5));
    CHECK(fault_distance(50.0, wd, unit_line(), kLumped) == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("each model inverts its own forward map") {
    const LineParameters line;
    for (auto kind : {DistanceModelKind::AsPrinted, DistanceModelKind::LumpedSqrt, DistanceModelKind::QuarterWave}) {
        const DistanceModel m{kind, 1.0};
        for (double d : {1.0, 50.0, 333.3, 1000.0}) {
            const double w0 = resonance_frequency(d, line, m);
            CHECK(fault_distance(0.0, w0, line, m) == doctest::Approx(d).epsilon(1e-12));
        }
    }
}

TEST_CASE("quarter-wave forward map") {
    const LineParameters line;
    const double d = 120.0;
    const double expect = std::numbers::pi / (2.0 * d * line.travel_time_per_km());
    CHECK(resonance_frequency(d, line, DistanceModel{DistanceModelKind::QuarterWave, 1.0}) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("distances far past the line end are rejected") {
    const LineParameters line;
    const double w0 = resonance_frequency(1200.0, line, kLumped);
    CHECK(thrown_kind([&] { (void)fault_distance(0.0, w0, line, kLumped); }) == ErrorKind::OutOfRange);
    const double near_end = resonance_frequency(1090.0, line, kLumped);
    CHECK(fault_distance(0.0, near_end, line, kLumped) == doctest::Approx(1090.0));
}

TEST_CASE("locate recovers a lumped-consistent closed-form trace") {
    const LineParameters line;
    const double d = 150.0;
    const double w0 = resonance_frequency(d, line, kLumped);
    const double alpha = 40.0;
    const double wd = std::sqrt(w0 * w0 - alpha * alpha);
    const auto clean = closed_form_discharge(alpha, wd, 0.0, 1000.0, 10e3, 0.5);
    LocateOptions opts;
    opts.d_act_km = d;
    const LocationEstimate est = locate(clean, line, opts);
    CHECK(oracle::relative(est.d_cal_km, d) < 0.01);
    CHECK(oracle::relative(est.alpha, alpha) < 0.02);
    CHECK(est.omega_0 == doctest::Approx(std::hypot(est.omega_d, est.alpha)).epsilon(1e-14));
    CHECK(est.zeta == doctest::Approx(est.alpha / est.omega_0).epsilon(1e-14));
    REQUIRE(est.epsilon_pct.has_value());

    const LocationEstimate noisy = locate(add_noise(clean, 30.0, 42), line, opts);
    CHECK(std::abs(*noisy.epsilon_pct - *est.epsilon_pct) <= 0.05);
}

TEST_CASE("locate attributes failures to a stage") {
    const DischargeTrace zeros{std::vector<double>(5000, 0.0), 10e3, 0.0};
    try {
        (void)locate(zeros, LineParameters{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientPeaks);
        CHECK(e.stage() == "extract_envelope_peaks");
    }
    const DischargeTrace flat{std::vector<double>(5000, 2.0), 10e3, 0.0};
    try {
        (void)locate(flat, LineParameters{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoOscillation);
        CHECK(e.stage() == "dominant_frequency");
    }
}

TEST_CASE("locate rejects traces recorded before isolation") {
    const auto tr = closed_form_discharge(30.0, kTwoPi * 200.0, 1.0, 0.0, 10e3, 0.5);
    LocateOptions opts;
    opts.t_isolated = 0.01;
    CHECK(thrown_kind([&] { (void)locate(tr, LineParameters{}, opts); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("calibration") {
    const LineParameters line;
    const std::vector<double> probes{100.0, 400.0, 800.0};

    SUBCASE("single-segment ladder is already lumped") {
        LadderOptions ladder;
        ladder.n_segments = 1;
        ladder.duration = 0.5;
        const CalibrationResult r = calibrate(line, probes, ladder, {DistanceModelKind::LumpedSqrt});
        CHECK(r.factor == doctest::Approx(1.0).epsilon(0.01));
        CHECK(r.raw_estimates_km.size() == 3);
    }
    SUBCASE("distributed ladder against the quarter-wave model") {
        LadderOptions ladder;
        const CalibrationResult r = calibrate(line, probes, ladder, {DistanceModelKind::QuarterWave});
        CHECK(r.factor == doctest::Approx(1.0).epsilon(0.05));
        CHECK(r.residual_spread < 0.01);
    }
    SUBCASE("one probe is not enough") {
        const std::vector<double> one{100.0};
        CHECK(thrown_kind([&] { (void)calibrate(line, one, LadderOptions{}); }) == ErrorKind::CalibrationUnstable);
    }
}

TEST_CASE("calibrated pipeline on the 50 km bolted fault") {
    const LineParameters line;
    const std::vector<double> probes{100.0, 400.0, 800.0};
    const LadderOptions ladder;
    const double k = calibrate(line, probes, ladder, {DistanceModelKind::QuarterWave}).factor;
    const auto tr = simulate_discharge(line, FaultScenario{50.0, 0.01, {}}, ladder, 10e3);
    LocateOptions opts;
    opts.model = {DistanceModelKind::QuarterWave, k};
    opts.d_act_km = 50.0;
    const LocationEstimate est = locate(tr, line, opts);
    CHECK(*est.epsilon_pct <= 0.5);
    CHECK(est.r_squared >= 0.80);
}

TEST_CASE("fitted alpha is unbiased under noise") {
    const LineParameters line;
    const auto clean = simulate_discharge(line, FaultScenario{50.0, 0.01, {}}, LadderOptions{}, 10e3);
    const double alpha_clean = fit_attenuation(extract_envelope_peaks(clean)).alpha;
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        sum += fit_attenuation(extract_envelope_peaks(add_noise(clean, 30.0, seed))).alpha;
    }
    CHECK(oracle::relative(sum / 100.0, alpha_clean) < 0.01);
}
