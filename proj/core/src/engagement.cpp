#include "salvo/engagement.hpp"

#include <cmath>
#include <string>

#include "salvo/error.hpp"

namespace salvo {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::degenerate_range: return "degenerate-range";
        case ErrorKind::invalid_speed_ordering: return "invalid-speed-ordering";
        case ErrorKind::invalid_gain: return "invalid-gain";
        case ErrorKind::singular_los_rate: return "singular-los-rate";
        case ErrorKind::singular_look_angle: return "singular-look-angle";
        case ErrorKind::disconnected_graph: return "disconnected-graph";
        case ErrorKind::vertex_out_of_range: return "vertex-out-of-range";
        case ErrorKind::overflow: return "overflow";
        case ErrorKind::domain: return "domain";
        case ErrorKind::constraint: return "constraint";
        case ErrorKind::non_finite: return "non-finite";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

const char* to_string(TargetKind kind) noexcept {
    switch (kind) {
        case TargetKind::stationary: return "stationary";
        case TargetKind::constant_speed: return "constant_speed";
        case TargetKind::maneuvering: return "maneuvering";
    }
    return "unknown";
}

double ManeuverProfile::operator()(double t) const {
    return bias + amplitude * std::sin(omega * t + phase);
}

double ManeuverProfile::max_rate() const { return std::abs(amplitude * omega); }

double look_angle(double gamma, double theta) { return wrap_pi(gamma - theta); }

RelativeRates relative_rates(const InterceptorKinematics& ik, const TargetModel& tgt,
                             double min_range) {
    if (!(ik.r > min_range)) {
        throw Error(ErrorKind::degenerate_range,
                    "range " + std::to_string(ik.r) + " m is at or below " +
                        std::to_string(min_range) + " m");
    }
    const double d = ik.gamma - ik.theta;
    const double bearing = tgt.gamma - ik.theta;
    RelativeRates rr;
    rr.r_dot = tgt.v * std::cos(bearing) - ik.v * std::cos(d);
    rr.v_theta = tgt.v * std::sin(bearing) - ik.v * std::sin(d);
    rr.theta_dot = rr.v_theta / ik.r;
    rr.v_r = rr.r_dot;
    // Keep the identity v_theta == r * theta_dot exact in floating point.
    rr.v_theta = ik.r * rr.theta_dot;
    return rr;
}

double heading_rate(double a, double v) { return a / v; }

Point interceptor_position(const InterceptorKinematics& ik, const TargetModel& tgt) {
    return {tgt.x - ik.r * std::cos(ik.theta), tgt.y - ik.r * std::sin(ik.theta)};
}

}  // namespace salvo
