#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "salvo/angles.hpp"
#include "salvo/engagement.hpp"
#include "salvo/network.hpp"

namespace salvo {

enum class Law {
    fixed_maneuvering,
    fixed_constant,
    fixed_stationary,
    switch_fixedtime_maneuvering,
    switch_fixedtime_stationary,
    switch_predefined_maneuvering,
    switch_predefined_constant,
    switch_predefined_stationary,
    pip_baseline,
};

const char* to_string(Law law) noexcept;
std::optional<Law> parse_law(std::string_view name);

// Law families.
bool uses_stationary_geometry(Law law);  // PN-type time-to-go and command shaping
bool compensates_maneuver(Law law);       // needs a maneuver estimate
bool is_predefined_switched(Law law);
bool is_fixedtime(Law law);               // exponential consensus function

struct GuidanceConfig {
    Law law = Law::fixed_maneuvering;
    double ts = 7.0;  // s
    double c = 0.0125;
    double d = 4.0;
    std::optional<double> B;    // exponential-law gain
    std::optional<double> eps;  // robustness margin in units of d(xi)/dt; unset = track current ranges
    std::optional<double> P;    // polynomial-law gain
    std::optional<double> mu;   // polynomial-law margin; unset = track current ranges
    double M_coef = 1.0;
    double N_coef = 1.0;
    double m_exp = 0.5;
    double n_exp = 2.0;
    double k_exp = 1.0;
    double N_nav = 3.0;
    double a_max = 20.0 * g0;
    double xi_max = 0.5;         // assumed bound on the maneuver estimation error, m/s^2
    double bound_margin = 0.01;  // strictness margin applied to derived eps / mu
    double boundary_layer = 0.0; // 0 keeps the exact sign function
    double theta_dot_floor = 1e-6;
    double sin2d_floor = 1e-4;
};

// Throws Error(validation) naming the first violated constraint.
void validate_guidance(const GuidanceConfig& cfg);

// ---------------------------------------------------------------- gain design

// (1/c) exp(|z|^c) |z|^(2-c). Throws overflow if |z|^c > 700.
double omega_exp(double zeta_abs, double c);
// sign(z) (1/c) exp(|z|^c) |z|^(1-c), zero at z = 0; |z|^c is capped at 700.
double omega_composite(double zeta, double c);

// Gamma function; throws domain for x <= 0.
double gamma_fn(double x);

double predefined_gain(double ts, double M_coef, double N_coef, double m_exp, double n_exp, double k_exp,
                       double min_edges, double min_lambda2);

double fixedtime_gain(int n, double d, double lambda2, double ts);
double fixedtime_bound(double B_min, double lambda2, int n, double d);

// max_i r_i / (v_i^2 - v_T^2) * xi_max
double epsilon_bound(double max_r_over_w, double xi_max);
double mu_bound(double P, double min_lambda2, double max_r_over_w, double xi_max);

// ------------------------------------------------------------ consensus terms

// B * omega_composite(zeta, c) + eps * sign(zeta)
double fixed_consensus_term(double zeta, double B, double c, double eps);

// P * sum_j [(M|dj|^m + N|dj|^n)^k + mu] * sgn(dj), dj = tgo_j - tgo_i; i is zero-based.
// With boundary_layer > 0 the sign is replaced by d / (|d| + boundary_layer).
double predefined_consensus_term(std::span<const double> tgos, const Topology& g, int i, double P,
                                 double M_coef, double N_coef, double m_exp, double n_exp,
                                 double k_exp, double mu, double boundary_layer = 0.0);

// ------------------------------------------------------------- command shaping

// Acceleration that makes the deviated-pursuit time-to-go error evolve as
// d(xi)/dt = U, given a maneuver estimate. Below theta_dot_floor only the
// nominal v * theta_dot survives.
double deviated_command(const InterceptorKinematics& ik, const RelativeRates& rr,
                        const TargetModel& tgt, double U, double aT_hat, double theta_dot_floor = 1e-6);

// Same for the stationary-target time-to-go. When |sin 2 delta| falls below
// the floor it is replaced by +-floor (sign kept, zero counted as positive).
double stationary_command(const InterceptorKinematics& ik, double U, double N, double sin2d_floor = 1e-4);

double saturate(double a, double a_max);

// ------------------------------------------------------- laws by name

enum class SwitchedVariant { maneuvering, constant, stationary };

double cmd_fixed_maneuvering(const InterceptorKinematics& ik, const RelativeRates& rr,
                             const TargetModel& tgt, double zeta, double aT_hat,
                             const GuidanceConfig& cfg, double lambda2, int n);
double cmd_fixed_constant(const InterceptorKinematics& ik, const RelativeRates& rr,
                          const TargetModel& tgt, double zeta, const GuidanceConfig& cfg,
                          double lambda2, int n);
double cmd_fixed_stationary(const InterceptorKinematics& ik, double zeta, const GuidanceConfig& cfg,
                            double lambda2, int n);
// cfg.B must be set.
double cmd_switched_fixedtime(const InterceptorKinematics& ik, const RelativeRates& rr,
                              const TargetModel& tgt, double zeta, double aT_hat,
                              const GuidanceConfig& cfg, SwitchedVariant variant);
// cfg.P must be set; cfg.mu is used only for the maneuvering variant. i is zero-based.
double cmd_switched_predefined(const InterceptorKinematics& ik, const RelativeRates& rr,
                               const TargetModel& tgt, std::span<const double> tgos,
                               const Topology& g_active, int i, double aT_hat,
                               const GuidanceConfig& cfg, SwitchedVariant variant);

// ---------------------------------------------- predicted interception point

Point pip_coords(const TargetModel& tgt, double tgo);

// Geometry relative to the predicted interception point, with tgo solved as
// the fixed point tgo = tgo_stationary(range to PIP(tgo)).
struct PipGeometry {
    InterceptorKinematics virt;  // r, theta relative to the PIP; gamma, v from the interceptor
    Point pip;
    double tgo = 0.0;
    int iterations = 0;
};

PipGeometry pip_geometry(const Point& interceptor, double gamma, double v, const TargetModel& tgt,
                         double N, double tgo_guess, int max_iter = 100, double tol = 1e-10);

// ---------------------------------------------- post-consensus geometry

// Range at look angle delta on the consensus manifold of the stationary law,
// starting from (delta0, r0). Zero at delta = 0.
double range_on_consensus(double delta, double delta0, double r0, double N);

}  // namespace salvo
