#include "memfuzz/device.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace memfuzz;

namespace {

DeviceParams ideal_params()
{
    return DeviceParams{};
}

DeviceParams exponential_params(double k = 100.0)
{
    DeviceParams p;
    p.model = DeviceModel::ExponentialSwitching;
    p.k = k;
    return p;
}

} // namespace

TEST_CASE("device parameters are validated")
{
    DeviceParams p;
    CHECK_NOTHROW(p.validate());
    p.r_off = p.r_on;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.r_on = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.q0 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.k = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(device_model_from_string("Linear"), std::invalid_argument);
}

TEST_CASE("m-efficiency")
{
    CHECK(MEfficiency::of(ideal_params()).value() == doctest::Approx(100.0));
    CHECK(MEfficiency::ideal().inverse() == 0.0);
    CHECK_THROWS_AS(MEfficiency(1.0), std::invalid_argument);
    CHECK_THROWS_AS(MEfficiency(std::nan("")), std::invalid_argument);
}

TEST_CASE("ideal bilevel memristance profile")
{
    const auto p = ideal_params();
    DeviceState s;
    CHECK(memristance(s, p) == 5050.0);

    s.q = 2e-6;
    // 100 + 9900 / (1 + e^-2)
    CHECK(memristance(s, p) == doctest::Approx(8819.891071981036).epsilon(1e-13));

    s.q = 1e-3;
    CHECK(memristance(s, p) == doctest::Approx(p.r_off).epsilon(1e-12));
    s.q = -1e-3;
    CHECK(memristance(s, p) == doctest::Approx(p.r_on).epsilon(1e-12));
    s.q = 1e300;
    CHECK(memristance(s, p) == p.r_off);
    s.q = -1e300;
    CHECK(memristance(s, p) == p.r_on);
}

TEST_CASE("exponential switching memristance is linear in w")
{
    const auto p = exponential_params();
    DeviceState s;
    s.w = 0.0;
    CHECK(memristance(s, p) == p.r_off);
    s.w = 1.0;
    CHECK(memristance(s, p) == p.r_on);
    s.w = 0.25;
    CHECK(memristance(s, p) == doctest::Approx(10000.0 - 0.25 * 9900.0));
}

TEST_CASE("step_device")
{
    const auto p = ideal_params();
    DeviceState s;

    SUBCASE("zero drive leaves the state unchanged")
    {
        CHECK(step_device(s, 0.0, 0.0, 123.0, p) == s);
        CHECK(step_device(s, 0.0, 0.0, 1e-9, exponential_params()) == s);
    }
    SUBCASE("charge integrates current")
    {
        const auto next = step_device(s, 1e-3, 0.0, 1e-3, p);
        CHECK(next.q == doctest::Approx(1e-6).epsilon(1e-15));
        s.polarity = -1;
        CHECK(step_device(s, 1e-3, 0.0, 1e-3, p).q == doctest::Approx(-1e-6).epsilon(1e-15));
    }
    SUBCASE("exponential rate ratio between v0 and 2 v0")
    {
        const auto e = exponential_params();
        const double dt = 1e-6;
        const double dw1 = step_device(s, 0.0, e.v0, dt, e).w - s.w;
        const double dw2 = step_device(s, 0.0, 2 * e.v0, dt, e).w - s.w;
        CHECK(dw2 / dw1 == doctest::Approx(3.086161269630488).epsilon(1e-9));
    }
    SUBCASE("exponential state is clamped to the rails")
    {
        const auto e = exponential_params();
        CHECK(step_device(s, 0.0, 1.0, 10.0, e).w == 1.0);
        CHECK(step_device(s, 0.0, -1.0, 10.0, e).w == 0.0);
        CHECK(step_device(s, 0.0, 1e4, 1.0, e).w == 1.0);
    }
    SUBCASE("rejects bad steps")
    {
        CHECK_THROWS_AS((void)step_device(s, 1.0, 0.0, 0.0, p), std::invalid_argument);
        CHECK_THROWS_AS((void)step_device(s, 1.0, 0.0, -1.0, p), std::invalid_argument);
        CHECK_THROWS_AS((void)step_device(s, std::nan(""), 0.0, 1.0, p), std::invalid_argument);
        CHECK_THROWS_AS((void)step_device(s, 0.0, INFINITY, 1.0, p), std::invalid_argument);
    }
}

TEST_CASE("condition (*) examples")
{
    CHECK(satisfies_condition_star(ideal_params(), 1e-3, 1.0));
    CHECK_FALSE(satisfies_condition_star(ideal_params(), 0.0, 1e9));
    CHECK_FALSE(satisfies_condition_star(exponential_params(), 0.0, 1e9));
    CHECK(satisfies_condition_star(exponential_params(10.0), exponential_params().v0, 10.0));
    // Too short a horizon does not reach a rail.
    CHECK_FALSE(satisfies_condition_star(ideal_params(), 1e-3, 1e-4));
    CHECK_THROWS_AS((void)satisfies_condition_star(ideal_params(), -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("property: ideal memristance is monotone in charge")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> q(-3e-5, 3e-5);
    const auto p = ideal_params();
    for (int i = 0; i < 2000; ++i) {
        DeviceState a, b;
        a.q = q(rng);
        b.q = q(rng);
        if (a.q > b.q) std::swap(a, b);
        CHECK(memristance(a, p) <= memristance(b, p));
    }
}

TEST_CASE("property: memristance stays between the rails under random drive")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> drive(-1.0, 1.0);
    std::uniform_real_distribution<double> dt(1e-6, 1e-2);
    for (auto p : {ideal_params(), exponential_params()}) {
        DeviceState s;
        for (int i = 0; i < 5000; ++i) {
            s = step_device(s, 1e-3 * drive(rng), drive(rng), dt(rng), p);
            const double m = memristance(s, p);
            REQUIRE(m >= p.r_on);
            REQUIRE(m <= p.r_off);
            if (p.model == DeviceModel::ExponentialSwitching) REQUIRE((s.w >= 0.0 && s.w <= 1.0));
        }
    }
}

TEST_CASE("property: flipping polarity and drive leaves the trajectory unchanged")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> drive(-1.0, 1.0);
    for (auto p : {ideal_params(), exponential_params()}) {
        DeviceState a, b;
        b.polarity = -1;
        for (int i = 0; i < 1000; ++i) {
            const double i_drive = 1e-4 * drive(rng);
            const double v_drive = drive(rng);
            a = step_device(a, i_drive, v_drive, 1e-4, p);
            b = step_device(b, -i_drive, -v_drive, 1e-4, p);
            REQUIRE(a.q == b.q);
            REQUIRE(a.w == b.w);
        }
    }
}

TEST_CASE("property: condition (*) holds for drives in [1e-6, 1]")
{
    std::mt19937_64 rng(14);
    for (auto p : {ideal_params(), exponential_params()}) {
        for (int i = 0; i < 100; ++i) {
            const double d = oracle::log_uniform(rng, 1e-6, 1.0);
            REQUIRE(satisfies_condition_star(p, d, condition_star_horizon(p, d)));
        }
    }
}
