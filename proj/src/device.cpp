#include "memfuzz/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace memfuzz {

std::string_view to_string(DeviceModel model)
{
    switch (model) {
    case DeviceModel::IdealBilevel: return "IdealBilevel";
    case DeviceModel::ExponentialSwitching: return "ExponentialSwitching";
    }
    return "?";
}

DeviceModel device_model_from_string(std::string_view name)
{
    if (name == "IdealBilevel") return DeviceModel::IdealBilevel;
    if (name == "ExponentialSwitching") return DeviceModel::ExponentialSwitching;
    throw std::invalid_argument("unknown device model '" + std::string(name) + "'");
}

void DeviceParams::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(r_on)) throw std::invalid_argument("device: r_on must be positive and finite");
    if (!positive(r_off) || !(r_on < r_off))
        throw std::invalid_argument("device: r_off must be finite and greater than r_on");
    if (!positive(q0)) throw std::invalid_argument("device: q0 must be positive");
    if (!positive(v0)) throw std::invalid_argument("device: v0 must be positive");
    if (!positive(k)) throw std::invalid_argument("device: k must be positive");
}

MEfficiency::MEfficiency(double mu) : mu_(mu)
{
    if (std::isnan(mu) || !(mu > 1.0))
        throw std::invalid_argument("m-efficiency must be greater than 1");
}

MEfficiency MEfficiency::of(const DeviceParams& params)
{
    return MEfficiency(params.r_off / params.r_on);
}

MEfficiency MEfficiency::ideal()
{
    return MEfficiency(std::numeric_limits<double>::infinity());
}

double MEfficiency::inverse() const
{
    return std::isinf(mu_) ? 0.0 : 1.0 / mu_;
}

namespace {

double logistic(double x)
{
    // Split by sign so exp never overflows.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

double memristance(const DeviceState& state, const DeviceParams& params)
{
    switch (params.model) {
    case DeviceModel::IdealBilevel:
        return params.r_on + (params.r_off - params.r_on) * logistic(state.q / params.q0);
    case DeviceModel::ExponentialSwitching:
        return params.r_off + (params.r_on - params.r_off) * std::clamp(state.w, 0.0, 1.0);
    }
    return params.r_off;
}

DeviceState step_device(const DeviceState& state, double through_current, double across_voltage,
                        double dt, const DeviceParams& params)
{
    if (!std::isfinite(dt) || !(dt > 0.0)) throw std::invalid_argument("step_device: dt must be positive");
    if (!std::isfinite(through_current) || !std::isfinite(across_voltage))
        throw std::invalid_argument("step_device: non-finite drive");

    DeviceState next = state;
    switch (params.model) {
    case DeviceModel::IdealBilevel:
        next.q = state.q + state.polarity * through_current * dt;
        break;
    case DeviceModel::ExponentialSwitching: {
        const double rate = params.k * std::sinh(across_voltage / params.v0);
        double dw = state.polarity * rate * dt;
        if (!std::isfinite(dw)) dw = std::copysign(2.0, dw);
        next.w = std::clamp(state.w + dw, 0.0, 1.0);
        break;
    }
    }
    return next;
}

namespace {

void check_drive(double drive_magnitude)
{
    if (std::isnan(drive_magnitude) || drive_magnitude < 0.0)
        throw std::invalid_argument("condition (*): drive magnitude must be non-negative");
}

bool near_rail(double m, const DeviceParams& params)
{
    return std::abs(m - params.r_off) <= 0.01 * params.r_off ||
           std::abs(m - params.r_on) <= 0.01 * params.r_on;
}

} // namespace

double condition_star_horizon(const DeviceParams& params, double drive_magnitude)
{
    check_drive(drive_magnitude);
    if (drive_magnitude == 0.0) return std::numeric_limits<double>::infinity();
    switch (params.model) {
    case DeviceModel::IdealBilevel: {
        // Logistic argument at which the device is within 1% of R_OFF.
        const double eps = 0.01 * params.r_off / (params.r_off - params.r_on);
        const double x = std::log(std::max(1.0 / eps - 1.0, std::exp(1.0)));
        return 2.0 * params.q0 * x / drive_magnitude;
    }
    case DeviceModel::ExponentialSwitching:
        return 2.0 / (params.k * std::sinh(drive_magnitude / params.v0));
    }
    return 0.0;
}

bool satisfies_condition_star(const DeviceParams& params, double drive_magnitude, double horizon)
{
    check_drive(drive_magnitude);
    if (drive_magnitude == 0.0 || !(horizon > 0.0)) return false;

    // Step so that each update moves at most 1% of the model's switching scale.
    double dt = 0.0;
    if (params.model == DeviceModel::IdealBilevel) {
        dt = 0.01 * params.q0 / drive_magnitude;
    } else {
        dt = 0.01 / (params.k * std::sinh(drive_magnitude / params.v0));
    }
    dt = std::min(dt, horizon);
    if (!(dt > 0.0)) dt = horizon;

    DeviceState state;
    const double current = params.model == DeviceModel::IdealBilevel ? drive_magnitude : 0.0;
    const double voltage = params.model == DeviceModel::ExponentialSwitching ? drive_magnitude : 0.0;
    double t = 0.0;
    while (t < horizon) {
        const double h = std::min(dt, horizon - t);
        state = step_device(state, current, voltage, h, params);
        t += h;
        if (near_rail(memristance(state, params), params)) return true;
        if (h < dt) break;
    }
    return false;
}

} // namespace memfuzz
