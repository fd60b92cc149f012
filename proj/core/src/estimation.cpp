#include "salvo/estimation.hpp"

#include <cmath>
#include <string>

#include "salvo/error.hpp"

namespace salvo {

double tgo_deviated(double r, double delta, double theta, double gamma_T, double v, double v_T) {
    if (!(v > v_T))
        throw Error(ErrorKind::invalid_speed_ordering,
                    "interceptor speed " + std::to_string(v) + " must exceed target speed " +
                        std::to_string(v_T));
    return r / std::cos(delta) * (v + v_T * std::cos(gamma_T - theta + delta)) / (v * v - v_T * v_T);
}

double tgo_stationary(double r, double delta, double v, double N) {
    if (N < 3.0) throw Error(ErrorKind::invalid_gain, "navigation gain N must be >= 3");
    const double s = std::sin(delta);
    return r / v * (1.0 + s * s / (4.0 * N - 2.0));
}

double disagreement(std::span<const double> tgos, const Topology& g, int i) {
    const double own = tgos[static_cast<std::size_t>(i - 1)];
    double z = 0.0;
    for (int j : g.adjacent(i - 1)) z += tgos[static_cast<std::size_t>(j)] - own;
    return z;
}

void ObserverGains::validate() const {
    if (!(G2 > G1 && G1 > G0 && G0 > 0.0))
        throw Error(ErrorKind::invalid_gain, "observer gains need G2 > G1 > G0 > 0");
    if (!(H2 > H1 && H1 > H0 && H0 > 0.0))
        throw Error(ErrorKind::invalid_gain, "observer gains need H2 > H1 > H0 > 0");
    if (!(F > 0.0)) throw Error(ErrorKind::invalid_gain, "observer bound F must be positive");
}

ObserverState observer_init(double v_theta_meas) { return {v_theta_meas, 0.0, 0.0}; }

namespace {
double signed_pow(double x, double p) { return sign(x) * std::pow(std::abs(x), p); }
}  // namespace

ObserverStep observer_step(const ObserverState& s, const ObserverGains& k, double theta_dot_meas,
                           double r, double r_dot, double delta, double a_self, double bearing,
                           double dt, double min_bearing_cos) {
    const double v_theta = r * theta_dot_meas;
    const double cb = std::cos(bearing);
    const double cb_floor = std::abs(cb) < min_bearing_cos ? (cb >= 0.0 ? min_bearing_cos : -min_bearing_cos) : cb;

    const double e0 = (s.w0 - v_theta) / cb_floor;
    const double u0 = -k.G2 * std::cbrt(k.F) * signed_pow(e0, 2.0 / 3.0) - k.H2 * e0 + s.w1;
    const double dw0 = -r_dot * theta_dot_meas - std::cos(delta) * a_self + cb * u0;

    const double e1 = s.w1 - u0;
    const double u1 = -k.G1 * std::sqrt(k.F) * signed_pow(e1, 0.5) - k.H1 * e1 + s.w2;

    const double e2 = s.w2 - u1;
    const double dw2 = -k.G0 * k.F * sign(e2) - k.H0 * e2;

    ObserverStep out;
    out.state.w0 = s.w0 + dt * dw0;
    out.state.w1 = s.w1 + dt * u1;
    out.state.w2 = s.w2 + dt * dw2;
    if (!std::isfinite(out.state.w0) || !std::isfinite(out.state.w1) || !std::isfinite(out.state.w2))
        throw Error(ErrorKind::non_finite, "observer state became non-finite");
    out.aT_hat = out.state.w1;
    return out;
}

double xi_rate_diagnostic(const InterceptorKinematics& ik, const TargetModel& tgt, double a_i,
                          double a_T, TgoLaw law, double N) {
    const double d = ik.delta();
    if (law == TgoLaw::stationary) {
        const double K = 4.0 * N - 2.0;
        const double s = std::sin(d);
        return 1.0 - std::cos(d) * (1.0 - s * s / K) +
               ik.r * std::sin(2.0 * d) * a_i / (ik.v * ik.v * K);
    }
    const RelativeRates rr = relative_rates(ik, tgt);
    if (std::abs(rr.theta_dot) < 1e-9)
        throw Error(ErrorKind::singular_los_rate, "line-of-sight rate too small");
    const double w = ik.v * ik.v - tgt.v * tgt.v;
    const double sec2 = 1.0 / (std::cos(d) * std::cos(d));
    const double r = ik.r, td = rr.theta_dot;
    return r * r * td * td * sec2 / w - r * r * td * sec2 * a_i / (ik.v * w) -
           r * std::sin(d + tgt.gamma - ik.theta) * a_T / (w * std::cos(d));
}

}  // namespace salvo
