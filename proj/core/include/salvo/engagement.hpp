#pragma once

#include "salvo/angles.hpp"

namespace salvo {

struct InterceptorKinematics {
    double r = 0.0;      // m
    double theta = 0.0;  // line-of-sight angle, rad
    double gamma = 0.0;  // heading, rad
    double v = 0.0;      // m/s

    double delta() const { return wrap_pi(gamma - theta); }
};

enum class TargetKind { stationary, constant_speed, maneuvering };

const char* to_string(TargetKind kind) noexcept;

// a_T(t) = bias + amplitude * sin(omega * t + phase)
struct ManeuverProfile {
    double bias = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;

    double operator()(double t) const;
    // Largest |d a_T / dt| the profile can produce.
    double max_rate() const;
};

struct TargetModel {
    TargetKind kind = TargetKind::stationary;
    double v = 0.0;       // m/s
    double gamma = 0.0;   // current heading, rad
    ManeuverProfile accel;
    double x = 0.0;
    double y = 0.0;

    double accel_at(double t) const {
        return kind == TargetKind::maneuvering ? accel(t) : 0.0;
    }
};

struct RelativeRates {
    double r_dot = 0.0;      // m/s
    double theta_dot = 0.0;  // rad/s
    double v_r = 0.0;        // m/s, equal to r_dot
    double v_theta = 0.0;    // m/s, equal to r * theta_dot
};

double look_angle(double gamma, double theta);

// Throws Error(degenerate_range) when ik.r <= min_range.
RelativeRates relative_rates(const InterceptorKinematics& ik, const TargetModel& tgt,
                             double min_range = 0.0);

double heading_rate(double a, double v);

// Cartesian position of an interceptor, reconstructed from the target
// position and the line of sight.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

Point interceptor_position(const InterceptorKinematics& ik, const TargetModel& tgt);

}  // namespace salvo
