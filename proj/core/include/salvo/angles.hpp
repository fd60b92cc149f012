#pragma once

#include <cmath>
#include <numbers>

namespace salvo {

inline constexpr double pi = std::numbers::pi;
inline constexpr double g0 = 9.81;

constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

// Maps any angle into (-pi, pi]. An input of exactly -pi comes back as +pi.
inline double wrap_pi(double a) {
    double w = std::remainder(a, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

constexpr double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace salvo
