#include "memfuzz/gate.hpp"

#include "memfuzz/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace memfuzz {

namespace {

void check_voltage(double v, const char* what)
{
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void write_number(std::ostream& out, double v)
{
    out << format_double(v);
}

} // namespace

void DividerConfig::validate() const
{
    for (double r : {r1, r2, r_load}) {
        if (!std::isfinite(r) || !(r > 0.0))
            throw std::invalid_argument("divider resistances must be positive and finite");
    }
}

LoopCurrents divider_currents(double v1, double v2, const DividerConfig& cfg)
{
    check_voltage(v1, "v1");
    check_voltage(v2, "v2");
    cfg.validate();
    const double r = cfg.r_load;
    const double delta = r * (cfg.r1 + cfg.r2) + cfg.r1 * cfg.r2;
    return {(-v1 * (r + cfg.r2) + v2 * r) / delta, (v2 * (r + cfg.r1) - v1 * r) / delta};
}

double divider_output(double v1, double v2, const DividerConfig& cfg)
{
    check_voltage(v1, "v1");
    check_voltage(v2, "v2");
    cfg.validate();
    return (v1 * cfg.r2 + v2 * cfg.r1) / (cfg.r1 + cfg.r2 + cfg.r1 * cfg.r2 / cfg.r_load);
}

std::string_view to_string(GateKind kind)
{
    return kind == GateKind::Max ? "Max" : "Min";
}

GateState make_gate(GateKind kind, const DeviceParams& params, double r_load)
{
    params.validate();
    if (!std::isfinite(r_load) || !(r_load > 0.0))
        throw std::invalid_argument("gate: load resistance must be positive");
    GateState gate;
    gate.kind = kind;
    gate.params = params;
    gate.r_load = r_load;
    gate.dev1.polarity = kind == GateKind::Max ? 1 : -1;
    gate.dev2.polarity = -gate.dev1.polarity;
    return gate;
}

double default_load(const DeviceParams& params)
{
    return 1000.0 * params.r_off;
}

void Trace::append(double t, double z_value, double m1_value, double m2_value)
{
    times.push_back(t);
    z.push_back(z_value);
    m1.push_back(m1_value);
    m2.push_back(m2_value);
}

void write_trace_csv(std::ostream& out, const Trace& trace)
{
    out << "t,z,m1,m2\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        write_number(out, trace.times[i]);
        out << ',';
        write_number(out, trace.z[i]);
        out << ',';
        write_number(out, trace.m1[i]);
        out << ',';
        write_number(out, trace.m2[i]);
        out << '\n';
    }
}

double read_gate(double x, double y, const GateState& gate)
{
    return divider_output(x, y, {gate.m1(), gate.m2(), gate.r_load});
}

double stable_step(double x, double y, const GateState& gate)
{
    check_voltage(x, "x");
    check_voltage(y, "y");
    const auto& p = gate.params;
    if (p.model == DeviceModel::IdealBilevel) {
        // |I| <= (|x - y| R + max(x, y) R_OFF) / (2 R R_ON) over all memristances.
        const double bound =
            (std::abs(x - y) + std::max(x, y) * p.r_off / gate.r_load) / (2.0 * p.r_on);
        return bound > 0.0 ? 0.01 * p.q0 / bound : std::numeric_limits<double>::infinity();
    }
    // The output node stays in [0, max(x, y)], so no device sees more than max(x, y).
    const double rate = p.k * std::sinh(std::max(x, y) / p.v0);
    return rate > 0.0 ? 0.01 / rate : std::numeric_limits<double>::infinity();
}

GateRun simulate_gate(double x, double y, GateState gate, double dt, double t_max)
{
    check_voltage(x, "x");
    check_voltage(y, "y");
    if (!std::isfinite(dt) || !(dt > 0.0)) throw std::invalid_argument("simulate_gate: dt must be positive");
    if (!std::isfinite(t_max) || t_max < dt)
        throw std::invalid_argument("simulate_gate: t_max must be at least dt");

    const auto& p = gate.params;
    const int drive_sign = toward_off_sign(p.model);
    GateRun run;
    double m1 = gate.m1();
    double m2 = gate.m2();
    double t = 0.0;
    while (t < t_max) {
        const double h = std::min(dt, t_max - t);
        if (!(h > 0.0) || t + h == t) break;

        const auto [i1, i2] = divider_currents(x, y, {m1, m2, gate.r_load});
        if (p.model == DeviceModel::IdealBilevel) {
            if (std::max(std::abs(i1), std::abs(i2)) * h > p.q0)
                throw std::invalid_argument("simulate_gate: dt too large, charge step exceeds q0");
        } else {
            const double v = std::max(std::abs(i1 * m1), std::abs(i2 * m2));
            if (p.k * std::sinh(v / p.v0) * h > 1.0)
                throw std::invalid_argument("simulate_gate: dt too large, state step exceeds 1");
        }
        gate.dev1 = step_device(gate.dev1, drive_sign * i1, drive_sign * i1 * m1, h, p);
        gate.dev2 = step_device(gate.dev2, drive_sign * i2, drive_sign * i2 * m2, h, p);
        t += h;

        const double n1 = gate.m1();
        const double n2 = gate.m2();
        run.trace.append(t, divider_output(x, y, {n1, n2, gate.r_load}), n1, n2);
        const bool settled = std::abs(n1 - m1) < kSettleTolerance * m1 &&
                             std::abs(n2 - m2) < kSettleTolerance * m2;
        m1 = n1;
        m2 = n2;
        if (settled) {
            run.converged = true;
            break;
        }
    }
    run.state = gate;
    return run;
}

double steady_state_max(double x, double y, MEfficiency mu)
{
    check_voltage(x, "x");
    check_voltage(y, "y");
    const double inv = mu.inverse();
    return (std::max(x, y) + inv * std::min(x, y)) / (1.0 + inv);
}

double steady_state_min(double x, double y, MEfficiency mu)
{
    check_voltage(x, "x");
    check_voltage(y, "y");
    const double inv = mu.inverse();
    return (std::min(x, y) + inv * std::max(x, y)) / (1.0 + inv);
}

double steady_state(GateKind kind, double x, double y, MEfficiency mu)
{
    return kind == GateKind::Max ? steady_state_max(x, y, mu) : steady_state_min(x, y, mu);
}

double gate_error_bound(MEfficiency mu, double r_off_over_r)
{
    if (!std::isfinite(r_off_over_r) || r_off_over_r < 0.0 || r_off_over_r >= 1.0)
        throw std::invalid_argument("gate_error_bound: R_OFF/R must lie in [0, 1)");
    const double inv = mu.inverse();
    return inv / (1.0 + inv) + r_off_over_r;
}

} // namespace memfuzz
