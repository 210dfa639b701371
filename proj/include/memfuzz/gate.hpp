#pragma once

// Resistive divider algebra and the antipodal memristor min/max gate.
//
// Both gates are the divider of two memristors (R1 = M1, R2 = M2) driven by
// sources X, Y against a shared load R. In the Max gate dq1/dt = +I1 and
// dq2/dt = -I2; the Min gate mirrors both polarities.

#include "memfuzz/device.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace memfuzz {

struct DividerConfig {
    double r1;
    double r2;
    double r_load;

    void validate() const;
};

struct LoopCurrents {
    double i1;
    double i2;
};

/// Mesh currents of the divider by Cramer's rule. Voltages must lie in [0, 1].
[[nodiscard]] LoopCurrents divider_currents(double v1, double v2, const DividerConfig& cfg);

/// Output node voltage (v1*R2 + v2*R1) / (R1 + R2 + R1*R2/R).
[[nodiscard]] double divider_output(double v1, double v2, const DividerConfig& cfg);

enum class GateKind { Max, Min };

std::string_view to_string(GateKind kind);

struct GateState {
    GateKind kind = GateKind::Max;
    DeviceState dev1;
    DeviceState dev2;
    DeviceParams params;
    double r_load = 1e7;

    [[nodiscard]] double m1() const { return memristance(dev1, params); }
    [[nodiscard]] double m2() const { return memristance(dev2, params); }
};

/// Fresh gate with both devices at their midpoint and antipodal polarities.
[[nodiscard]] GateState make_gate(GateKind kind, const DeviceParams& params, double r_load);

/// Load resistance used when none is given: 1000 * R_OFF.
[[nodiscard]] double default_load(const DeviceParams& params);

struct Trace {
    std::vector<double> times;
    std::vector<double> z;
    std::vector<double> m1;
    std::vector<double> m2;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool empty() const { return times.empty(); }
    void append(double t, double z_value, double m1_value, double m2_value);
};

/// CSV with header `t,z,m1,m2`, 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);

struct GateRun {
    Trace trace;
    GateState state;
    bool converged = false;
};

/// Relative per-step memristance change below which a gate counts as settled.
inline constexpr double kSettleTolerance = 1e-9;

/// Forward-Euler transient of one gate under constant inputs. Starts from
/// `gate` and returns its final state. Stops at t_max or once both
/// memristances change by less than kSettleTolerance (relative) in a step.
/// Throws std::invalid_argument if a step would move the charge by more than
/// q0 (or w by more than 1).
[[nodiscard]] GateRun simulate_gate(double x, double y, GateState gate, double dt, double t_max);

/// Largest step for which no reachable state moves by more than 1% of the
/// device switching scale under inputs (x, y). Infinity for x = y = 0.
[[nodiscard]] double stable_step(double x, double y, const GateState& gate);

/// Divider output with the gate's present memristances.
[[nodiscard]] double read_gate(double x, double y, const GateState& gate);

/// Settled outputs in the R -> inf limit for m-efficiency mu.
[[nodiscard]] double steady_state_max(double x, double y, MEfficiency mu);
[[nodiscard]] double steady_state_min(double x, double y, MEfficiency mu);
[[nodiscard]] double steady_state(GateKind kind, double x, double y, MEfficiency mu);

/// Upper bound on |settled output - exact max/min| for inputs in [0, 1]:
/// mu^-1 / (1 + mu^-1) + R_OFF / R.
[[nodiscard]] double gate_error_bound(MEfficiency mu, double r_off_over_r);

} // namespace memfuzz
