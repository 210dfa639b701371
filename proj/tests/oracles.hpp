#pragma once

// Test-only reference computations, independent of the library code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Gaussian elimination with partial pivoting on a 2x2 system A x = b.
inline std::array<double, 2> solve2(std::array<std::array<double, 2>, 2> a, std::array<double, 2> b)
{
    if (std::abs(a[1][0]) > std::abs(a[0][0])) {
        std::swap(a[0], a[1]);
        std::swap(b[0], b[1]);
    }
    const double f = a[1][0] / a[0][0];
    a[1][1] -= f * a[0][1];
    b[1] -= f * b[0];
    const double x1 = b[1] / a[1][1];
    const double x0 = (b[0] - a[0][1] * x1) / a[0][0];
    return {x0, x1};
}

// Mesh equations of the divider: [[R+R1, -R], [-R, R+R2]] I = [-V1, V2].
inline std::array<double, 2> mesh_currents(double v1, double v2, double r1, double r2, double r)
{
    return solve2({{{r + r1, -r}, {-r, r + r2}}}, {-v1, v2});
}

// Output voltage R (I2 - I1) from the same mesh equations, solved in long
// double for the unknowns (I1, D = I2 - I1) so that D carries no cancellation:
//   R1 I1 - R D = -V1,   R2 I1 + (R + R2) D = V2.
inline double mesh_output(double v1, double v2, double r1, double r2, double r)
{
    using ld = long double;
    std::array<std::array<ld, 2>, 2> a{{{ld(r1), -ld(r)}, {ld(r2), ld(r) + ld(r2)}}};
    std::array<ld, 2> b{-ld(v1), ld(v2)};
    if (std::abs(a[1][0]) > std::abs(a[0][0])) {
        std::swap(a[0], a[1]);
        std::swap(b[0], b[1]);
    }
    const ld f = a[1][0] / a[0][0];
    a[1][1] -= f * a[0][1];
    b[1] -= f * b[0];
    const ld d = b[1] / a[1][1];
    return static_cast<double>(ld(r) * d);
}

inline std::vector<double> sorted(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

} // namespace oracle
