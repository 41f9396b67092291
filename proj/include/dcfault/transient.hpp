#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "dcfault/model.hpp"

namespace dcfault {

/// Uniformly sampled current record. Sample n sits at t0 + n/fs.
struct DischargeTrace {
    std::vector<double> samples;
    double fs = 0.0;
    double t0 = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] double dt() const noexcept { return 1.0 / fs; }
    [[nodiscard]] double time(std::size_t n) const noexcept {
        return t0 + static_cast<double>(n) / fs;
    }
    [[nodiscard]] double duration() const noexcept {
        return static_cast<double>(samples.size()) / fs;
    }

    friend bool operator==(const DischargeTrace&, const DischargeTrace&) = default;
};

/// Throws InvalidParameter unless fs > 0, the record is non-empty and every sample is finite.
void validate(const DischargeTrace& trace);

/// Every node at the pole voltage, every inductor current zero.
struct UniformProfile {};

/// Explicit node voltages (one per shunt capacitor, terminal first) and
/// optional residual branch currents (empty means zero).
struct CustomProfile {
    std::vector<double> node_voltages;
    std::vector<double> branch_currents;
};

using InitialProfile = std::variant<UniformProfile, CustomProfile>;

/// Which series branch the recorder sees.
enum class CurrentProbe {
    FaultPath,  ///< last segment, i.e. the current discharged into the fault
    Terminal,   ///< first segment, adjacent to the open breaker
};

struct LadderOptions {
    std::size_t n_segments = 200;
    double internal_step = 1e-6;
    double duration = 0.5;
    InitialProfile initial_profile = UniformProfile{};
    CurrentProbe probe = CurrentProbe::FaultPath;
};

/// Under-damped RLC response d1 e^{-at} cos(wt) + d2 e^{-at} sin(wt),
/// sampled at t_n = n/fs for round(duration*fs) samples.
[[nodiscard]] DischargeTrace closed_form_discharge(double alpha, double omega_d, double d1, double d2,
                                                   double fs, double duration);

struct LadderState {
    std::vector<double> node_voltage;    ///< shunt capacitor voltages, node 0 at the terminal
    std::vector<double> branch_current;  ///< series branch k flows from node k towards node k+1
};

/// Isolated section between the open breaker and the fault: N series R-L
/// branches with a shunt capacitor at the sending node of each branch. The
/// fault resistance closes the last branch to ground.
class LadderNetwork {
public:
    LadderNetwork(const LineParameters& line, const FaultScenario& scenario, std::size_t n_segments);

    [[nodiscard]] std::size_t segments() const noexcept { return n_; }
    [[nodiscard]] double segment_resistance() const noexcept { return r_; }
    [[nodiscard]] double segment_inductance() const noexcept { return l_; }
    [[nodiscard]] double segment_capacitance() const noexcept { return c_; }
    [[nodiscard]] double fault_resistance() const noexcept { return r_fault_; }
    /// Series resistance of branch k including the fault resistance on the last one.
    [[nodiscard]] double branch_resistance(std::size_t k) const noexcept {
        return k + 1 == n_ ? r_ + r_fault_ : r_;
    }

    [[nodiscard]] LadderState initial_state(const InitialProfile& profile, double pole_voltage) const;

private:
    std::size_t n_;
    double r_;
    double l_;
    double c_;
    double r_fault_;
};

/// Sum of 1/2 C v^2 over capacitors and 1/2 L i^2 over inductors (J).
[[nodiscard]] double stored_energy(const LadderNetwork& network, const LadderState& state);

/// Trapezoidal companion-model integrator. Each step solves one symmetric
/// tridiagonal nodal system whose factorisation is computed once.
class TrapezoidalLadder {
public:
    TrapezoidalLadder(const LadderNetwork& network, double step);

    [[nodiscard]] double step() const noexcept { return h_; }
    void advance(LadderState& state);

private:
    const LadderNetwork* network_;
    double h_;
    double cap_conductance_;
    std::vector<double> branch_conductance_;
    std::vector<double> branch_history_gain_;
    std::vector<double> lower_;       // sub-diagonal multipliers
    std::vector<double> inv_pivot_;   // reciprocal pivots
    std::vector<double> upper_;       // super-diagonal after scaling
    std::vector<double> rhs_;
    std::vector<double> history_;
};

/// Integrates the ladder from t_isolated and records the probed branch
/// current, decimated to fs_out by an exact stride. The internal step is
/// shrunk, if needed, to the largest integer divisor of 1/fs_out.
[[nodiscard]] DischargeTrace simulate_discharge(const LineParameters& line, const FaultScenario& scenario,
                                                const LadderOptions& options, double fs_out);

}  // namespace dcfault
