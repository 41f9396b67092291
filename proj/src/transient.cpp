#include "dcfault/transient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

void validate(const DischargeTrace& trace) {
    if (!std::isfinite(trace.fs) || trace.fs <= 0.0) throw_invalid("trace.fs", "> 0");
    if (trace.samples.empty()) throw_invalid("trace.samples", "non-empty");
    if (!std::isfinite(trace.t0)) throw_invalid("trace.t0", "finite");
    for (double s : trace.samples) {
        if (!std::isfinite(s)) throw_invalid("trace.samples", "finite values");
    }
}

DischargeTrace closed_form_discharge(double alpha, double omega_d, double d1, double d2, double fs,
                                     double duration) {
    for (double v : {alpha, omega_d, d1, d2, fs, duration}) {
        if (!std::isfinite(v)) throw_invalid("closed_form_discharge inputs", "finite");
    }
    if (alpha < 0.0) throw_invalid("alpha", ">= 0");
    if (omega_d <= 0.0) throw_invalid("omega_d", "> 0");
    if (fs <= 0.0) throw_invalid("fs", "> 0");
    if (duration <= 0.0) throw_invalid("duration", "> 0");

    const auto n = static_cast<std::size_t>(std::llround(duration * fs));
    DischargeTrace trace{std::vector<double>(n == 0 ? 1 : n), fs, 0.0};
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        const double t = static_cast<double>(k) / fs;
        const double env = std::exp(-alpha * t);
        trace.samples[k] = env * (d1 * std::cos(omega_d * t) + d2 * std::sin(omega_d * t));
    }
    return trace;
}

LadderNetwork::LadderNetwork(const LineParameters& line, const FaultScenario& scenario,
                             std::size_t n_segments)
    : n_(n_segments), r_(0.0), l_(0.0), c_(0.0), r_fault_(scenario.r_fault) {
    if (n_segments < 1) throw_invalid("ladder.segments", ">= 1");
    const double per = scenario.d_act_km / static_cast<double>(n_segments);
    r_ = line.r_per_km * per;
    l_ = line.l_per_km * per;
    c_ = line.c_per_km * per;
}

LadderState LadderNetwork::initial_state(const InitialProfile& profile, double pole_voltage) const {
    LadderState state{std::vector<double>(n_, 0.0), std::vector<double>(n_, 0.0)};
    if (std::holds_alternative<UniformProfile>(profile)) {
        state.node_voltage.assign(n_, pole_voltage);
        return state;
    }
    const auto& custom = std::get<CustomProfile>(profile);
    if (custom.node_voltages.size() != n_) {
        throw_invalid("initial_profile.node_voltages", "one entry per segment (" + std::to_string(n_) + ")");
    }
    if (!custom.branch_currents.empty() && custom.branch_currents.size() != n_) {
        throw_invalid("initial_profile.branch_currents", "empty or one entry per segment");
    }
    state.node_voltage = custom.node_voltages;
    if (!custom.branch_currents.empty()) state.branch_current = custom.branch_currents;
    return state;
}

double stored_energy(const LadderNetwork& network, const LadderState& state) {
    double cap = 0.0;
    for (double v : state.node_voltage) cap += v * v;
    double ind = 0.0;
    for (double i : state.branch_current) ind += i * i;
    return 0.5 * network.segment_capacitance() * cap + 0.5 * network.segment_inductance() * ind;
}

TrapezoidalLadder::TrapezoidalLadder(const LadderNetwork& network, double step)
    : network_(&network), h_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw_invalid("ladder.internal_step", "> 0");
    const std::size_t n = network.segments();
    const double two_l_over_h = 2.0 * network.segment_inductance() / h_;
    cap_conductance_ = 2.0 * network.segment_capacitance() / h_;

    branch_conductance_.resize(n);
    branch_history_gain_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r = network.branch_resistance(k);
        branch_conductance_[k] = 1.0 / (two_l_over_h + r);
        branch_history_gain_[k] = two_l_over_h - r;
    }

    // Nodal matrix: diag_k = Gc + G_{k-1} + G_k, off-diagonal -G_k between k and k+1.
    lower_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    inv_pivot_.assign(n, 0.0);
    double prev_upper = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? branch_conductance_[k - 1] : 0.0;
        const double diag = cap_conductance_ + left + branch_conductance_[k];
        const double sub = -left;
        const double pivot = diag - sub * prev_upper;
        inv_pivot_[k] = 1.0 / pivot;
        lower_[k] = sub;
        const double super = k + 1 < n ? -branch_conductance_[k] : 0.0;
        upper_[k] = super * inv_pivot_[k];
        prev_upper = upper_[k];
    }
    rhs_.resize(n);
    history_.resize(n);
}

void TrapezoidalLadder::advance(LadderState& state) {
    const std::size_t n = network_->segments();
    auto& v = state.node_voltage;
    auto& i = state.branch_current;

    for (std::size_t k = 0; k < n; ++k) {
        const double v_next = k + 1 < n ? v[k + 1] : 0.0;
        history_[k] = branch_conductance_[k] * (branch_history_gain_[k] * i[k] + (v[k] - v_next));
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double i_in = k > 0 ? i[k - 1] : 0.0;
        const double j_in = k > 0 ? history_[k - 1] : 0.0;
        rhs_[k] = cap_conductance_ * v[k] + (i_in - i[k]) + j_in - history_[k];
    }

    // Forward elimination then back substitution.
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        prev = (rhs_[k] - lower_[k] * prev) * inv_pivot_[k];
        rhs_[k] = prev;
    }
    v[n - 1] = rhs_[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        v[k] = rhs_[k] - upper_[k] * v[k + 1];
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double v_next = k + 1 < n ? v[k + 1] : 0.0;
        i[k] = branch_conductance_[k] * (v[k] - v_next) + history_[k];
    }
}

DischargeTrace simulate_discharge(const LineParameters& line, const FaultScenario& scenario,
                                  const LadderOptions& options, double fs_out) {
    (void)validate(line, scenario);
    if (!std::isfinite(fs_out) || fs_out <= 0.0) throw_invalid("fs", "> 0");
    if (options.n_segments < 1) throw_invalid("ladder.segments", ">= 1");
    if (!std::isfinite(options.duration) || options.duration <= 0.0) throw_invalid("ladder.duration_s", "> 0");
    const double period = 1.0 / fs_out;
    if (!std::isfinite(options.internal_step) || options.internal_step <= 0.0 ||
        options.internal_step > 0.5 * period * (1.0 + 1e-12)) {
        throw_invalid("ladder.internal_step_s", "0 < step <= 1/(2*fs)");
    }

    const auto stride = static_cast<std::size_t>(std::ceil(period / options.internal_step - 1e-9));
    const double step = period / static_cast<double>(stride);

    const LadderNetwork network(line, scenario, options.n_segments);
    LadderState state = network.initial_state(options.initial_profile, line.pole_voltage);
    TrapezoidalLadder integrator(network, step);

    const double energy0 = stored_energy(network, state);
    const double l_total = network.segment_inductance() * static_cast<double>(network.segments());
    const double limit = energy0 > 0.0 ? 1e3 * std::sqrt(2.0 * energy0 / l_total) : 0.0;
    const std::size_t probe = options.probe == CurrentProbe::Terminal ? 0 : network.segments() - 1;

    const auto n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.duration * fs_out)));
    DischargeTrace trace{std::vector<double>(n_out), fs_out, scenario.isolation.t_isolated};
    for (std::size_t s = 0; s < n_out; ++s) {
        const double sample = state.branch_current[probe];
        if (!std::isfinite(sample) || (energy0 > 0.0 && std::abs(sample) > limit)) {
            throw Error(ErrorKind::UnstableIntegration,
                        "probe current left the stored-energy bound at t=" + std::to_string(trace.time(s)));
        }
        trace.samples[s] = sample;
        if (s + 1 < n_out) {
            for (std::size_t k = 0; k < stride; ++k) integrator.advance(state);
        }
    }
    return trace;
}

}  // namespace dcfault
