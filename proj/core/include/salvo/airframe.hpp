#pragma once

#include "salvo/angles.hpp"

namespace salvo {

struct AirframeState {
    double alpha = 0.0;    // angle of attack, rad
    double q = 0.0;        // pitch rate, rad/s
    double pitch = 0.0;    // rad
    double delta_c = 0.0;  // canard deflection, rad
    double delta_t = 0.0;  // tail deflection, rad
};

// Affine aerodynamics:
//   L = L_alpha*alpha + L_dc*delta_c + L_dt*delta_t                 [N]
//   M = M_alpha*alpha + M_q*q + M_dc*delta_c + M_dt*delta_t         [N m]
// The defaults are an engine-chosen stable airframe, not a real vehicle.
struct AirframeParams {
    double mass = 100.0;     // kg
    double inertia = 50.0;   // kg m^2
    double tau_c = 0.02;     // s
    double tau_t = 0.02;     // s
    double L_alpha = 1.0e5;
    double L_dc = 2.0e4;
    double L_dt = 1.0e4;
    double M_alpha = -5.0e3;
    double M_q = -575.0;
    double M_dc = 3.0e4;
    double M_dt = -1.0e4;
    double canard_share = 0.5;    // fraction of the deflection command sent to the canard
    double alloc_gain = 2.0e-4;   // rad per m/s^2 of acceleration error
    double max_deflection = deg2rad(30.0);

    // Throws Error(validation) on non-positive mass, inertia or time constants,
    // or a share outside [0, 1].
    void validate() const;
};

double firstorder_lag_step(double x, double setpoint, double tau, double dt);

double lift_acceleration(const AirframeState& s, const AirframeParams& p);

struct AirframeStep {
    AirframeState state;
    double a_real = 0.0;  // acceleration at the start of the step, m/s^2
};

// Trim deflection feed-forward plus proportional correction on the
// acceleration error, fins through exact first-order lags, then the rigid-body
// states by RK4 with the new fin positions held.
AirframeStep airframe_step(const AirframeState& s, double a_cmd, const AirframeParams& p, double v,
                           double dt);

}  // namespace salvo
