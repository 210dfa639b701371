#pragma once

// Phenomenological memristor models.
//
// Two profiles are provided. IdealBilevel is charge controlled: memristance
// is a logistic function of the accumulated charge and saturates at R_ON for
// q -> -inf and at R_OFF for q -> +inf. ExponentialSwitching is driven by
// the voltage across the device through dw/dt = k * sinh(v / v0) acting on a
// normalized state w in [0, 1]; w = 0 is R_OFF and w = 1 is R_ON.

#include <string_view>

namespace memfuzz {

enum class DeviceModel { IdealBilevel, ExponentialSwitching };

std::string_view to_string(DeviceModel model);
DeviceModel device_model_from_string(std::string_view name);

struct DeviceParams {
    double r_on = 100.0;     // ohm
    double r_off = 10'000.0; // ohm
    double q0 = 1e-6;        // coulomb
    double v0 = 0.2;         // volt
    double k = 100.0;        // 1/second
    DeviceModel model = DeviceModel::IdealBilevel;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    bool operator==(const DeviceParams&) const = default;
};

struct DeviceState {
    double q = 0.0;   // IdealBilevel charge
    double w = 0.5;   // ExponentialSwitching state
    int polarity = 1; // +1 or -1

    bool operator==(const DeviceState&) const = default;
};

/// Ratio R_OFF / R_ON. Infinity is accepted and denotes the ideal limit.
class MEfficiency {
public:
    explicit MEfficiency(double mu);
    static MEfficiency of(const DeviceParams& params);
    static MEfficiency ideal();

    [[nodiscard]] double value() const { return mu_; }
    /// 1/mu, exactly zero in the ideal limit.
    [[nodiscard]] double inverse() const;

private:
    double mu_;
};

[[nodiscard]] double memristance(const DeviceState& state, const DeviceParams& params);

/// Sign of the drive (current for the ideal profile, voltage for the
/// exponential one) that moves a polarity +1 device toward R_OFF.
[[nodiscard]] constexpr int toward_off_sign(DeviceModel model)
{
    return model == DeviceModel::IdealBilevel ? 1 : -1;
}

/// Forward-Euler advance of one device. IdealBilevel integrates
/// through_current, ExponentialSwitching integrates the sinh rate law of
/// across_voltage. Throws std::invalid_argument for dt <= 0 or non-finite
/// inputs.
[[nodiscard]] DeviceState step_device(const DeviceState& state, double through_current,
                                      double across_voltage, double dt,
                                      const DeviceParams& params);

/// Time a constant drive of the given magnitude needs to saturate a device
/// started from its midpoint, with a 2x margin.
[[nodiscard]] double condition_star_horizon(const DeviceParams& params, double drive_magnitude);

/// Applies a constant drive (ampere for IdealBilevel, volt for
/// ExponentialSwitching) to a midpoint device for at most `horizon` seconds
/// and reports whether memristance came within 1% of either rail.
[[nodiscard]] bool satisfies_condition_star(const DeviceParams& params, double drive_magnitude,
                                            double horizon);

} // namespace memfuzz
