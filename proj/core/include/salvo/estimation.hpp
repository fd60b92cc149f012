#pragma once

#include <span>

#include "salvo/engagement.hpp"
#include "salvo/network.hpp"

namespace salvo {

enum class TgoLaw { deviated_pursuit, stationary };

// Time-to-go on a deviated-pursuit course of fixed look angle.
// Throws invalid_speed_ordering when v <= v_T.
double tgo_deviated(double r, double delta, double theta, double gamma_T, double v, double v_T);

// Time-to-go of proportional navigation with gain N against a fixed point.
// Throws invalid_gain when N < 3.
double tgo_stationary(double r, double delta, double v, double N);

// zeta_i = sum over neighbours j of (tgo_j - tgo_i); i is one-based.
double disagreement(std::span<const double> tgos, const Topology& g, int i);

struct ObserverGains {
    double G0 = 0.01, G1 = 0.05, G2 = 1.30;
    double H0 = 0.005, H1 = 3.25, H2 = 3.3;
    double F = 0.1;  // bound on |d a_T / dt|

    // Throws invalid_gain unless G2 > G1 > G0 > 0, H2 > H1 > H0 > 0, F > 0.
    void validate() const;
};

// w0 tracks the transverse relative velocity r * theta_dot (m/s), w1 is the
// maneuver estimate (m/s^2) and w2 its rate state (m/s^3).
struct ObserverState {
    double w0 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

struct ObserverStep {
    ObserverState state;
    double aT_hat = 0.0;
};

ObserverState observer_init(double v_theta_meas);

// One explicit-Euler step. bearing = gamma_T - theta. The innovation is scaled
// by cos(bearing), floored at `min_bearing_cos` in magnitude, so that the loop
// gain seen by the estimate does not depend on the engagement geometry.
ObserverStep observer_step(const ObserverState& s, const ObserverGains& gains, double theta_dot_meas,
                           double r, double r_dot, double delta, double a_self, double bearing,
                           double dt, double min_bearing_cos = 0.05);

// Analytic rate of the interception-time error xi = t + tgo - T_f.
// Deviated pursuit needs |theta_dot| >= 1e-9 (singular_los_rate otherwise).
double xi_rate_diagnostic(const InterceptorKinematics& ik, const TargetModel& tgt, double a_i,
                          double a_T, TgoLaw law, double N = 3.0);

}  // namespace salvo
