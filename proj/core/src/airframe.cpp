#include "salvo/airframe.hpp"

#include <algorithm>
#include <cmath>

#include "salvo/error.hpp"

namespace salvo {

void AirframeParams::validate() const {
    if (!(mass > 0.0)) throw Error(ErrorKind::validation, "airframe mass > 0 violated");
    if (!(inertia > 0.0)) throw Error(ErrorKind::validation, "airframe inertia > 0 violated");
    if (!(tau_c > 0.0) || !(tau_t > 0.0))
        throw Error(ErrorKind::validation, "fin time constants > 0 violated");
    if (!(canard_share >= 0.0 && canard_share <= 1.0))
        throw Error(ErrorKind::validation, "canard_share in [0,1] violated");
    if (!(max_deflection > 0.0)) throw Error(ErrorKind::validation, "max_deflection > 0 violated");
    const double Ld = canard_share * L_dc + (1.0 - canard_share) * L_dt;
    const double Md = canard_share * M_dc + (1.0 - canard_share) * M_dt;
    if (std::abs(L_alpha * Md - Ld * M_alpha) < 1e-9)
        throw Error(ErrorKind::validation, "airframe coefficients admit no trim solution");
}

double firstorder_lag_step(double x, double setpoint, double tau, double dt) {
    return x + (setpoint - x) * -std::expm1(-dt / tau);
}

double lift_acceleration(const AirframeState& s, const AirframeParams& p) {
    return (p.L_alpha * s.alpha + p.L_dc * s.delta_c + p.L_dt * s.delta_t) / p.mass;
}

namespace {

struct Rigid {
    double alpha, q, pitch;
};

Rigid rigid_rate(const Rigid& x, double dc, double dt_fin, const AirframeParams& p, double v) {
    const double lift = p.L_alpha * x.alpha + p.L_dc * dc + p.L_dt * dt_fin;
    const double moment = p.M_alpha * x.alpha + p.M_q * x.q + p.M_dc * dc + p.M_dt * dt_fin;
    return {x.q - lift / (p.mass * v), moment / p.inertia, x.q};
}

}  // namespace

AirframeStep airframe_step(const AirframeState& s, double a_cmd, const AirframeParams& p, double v,
                           double dt) {
    AirframeStep out;
    out.a_real = lift_acceleration(s, p);

    // Steady pull-up at acceleration a: alpha_dot = 0 gives q = a / v, and the
    // moment balances. Solve the 2x2 system for (alpha, u).
    const double sc = p.canard_share, st = 1.0 - p.canard_share;
    const double Ld = sc * p.L_dc + st * p.L_dt;
    const double Md = sc * p.M_dc + st * p.M_dt;
    const double det = p.L_alpha * Md - Ld * p.M_alpha;
    const double u_trim = (p.L_alpha * (-p.M_q * a_cmd / v) - p.M_alpha * p.mass * a_cmd) / det;
    double u = u_trim + p.alloc_gain * (a_cmd - out.a_real);

    const double lim = p.max_deflection;
    const double dc_cmd = std::clamp(sc * u, -lim, lim);
    const double dt_cmd = std::clamp(st * u, -lim, lim);

    out.state.delta_c = firstorder_lag_step(s.delta_c, dc_cmd, p.tau_c, dt);
    out.state.delta_t = firstorder_lag_step(s.delta_t, dt_cmd, p.tau_t, dt);

    const double dc = out.state.delta_c, dtf = out.state.delta_t;
    const Rigid x0{s.alpha, s.q, s.pitch};
    auto add = [](const Rigid& a, const Rigid& b, double h) {
        return Rigid{a.alpha + h * b.alpha, a.q + h * b.q, a.pitch + h * b.pitch};
    };
    const Rigid k1 = rigid_rate(x0, dc, dtf, p, v);
    const Rigid k2 = rigid_rate(add(x0, k1, dt / 2), dc, dtf, p, v);
    const Rigid k3 = rigid_rate(add(x0, k2, dt / 2), dc, dtf, p, v);
    const Rigid k4 = rigid_rate(add(x0, k3, dt), dc, dtf, p, v);
    out.state.alpha = s.alpha + dt / 6 * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha);
    out.state.q = s.q + dt / 6 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q);
    out.state.pitch = s.pitch + dt / 6 * (k1.pitch + 2 * k2.pitch + 2 * k3.pitch + k4.pitch);

    if (!std::isfinite(out.state.alpha) || !std::isfinite(out.state.q) || !std::isfinite(out.state.pitch))
        throw Error(ErrorKind::non_finite, "airframe state became non-finite");
    return out;
}

}  // namespace salvo
