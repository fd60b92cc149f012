#include "salvo/guidance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "salvo/error.hpp"
#include "salvo/estimation.hpp"

namespace salvo {

namespace {

constexpr std::array<std::pair<Law, const char*>, 9> kLawNames{{
    {Law::fixed_maneuvering, "fixed_maneuvering"},
    {Law::fixed_constant, "fixed_constant"},
    {Law::fixed_stationary, "fixed_stationary"},
    {Law::switch_fixedtime_maneuvering, "switch_fixedtime_maneuvering"},
    {Law::switch_fixedtime_stationary, "switch_fixedtime_stationary"},
    {Law::switch_predefined_maneuvering, "switch_predefined_maneuvering"},
    {Law::switch_predefined_constant, "switch_predefined_constant"},
    {Law::switch_predefined_stationary, "switch_predefined_stationary"},
    {Law::pip_baseline, "pip_baseline"},
}};

constexpr double kExpArgCap = 700.0;

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorKind::validation, what); }

}  // namespace

const char* to_string(Law law) noexcept {
    for (auto [l, name] : kLawNames)
        if (l == law) return name;
    return "unknown";
}

std::optional<Law> parse_law(std::string_view name) {
    for (auto [l, n] : kLawNames)
        if (name == n) return l;
    return std::nullopt;
}

bool uses_stationary_geometry(Law law) {
    return law == Law::fixed_stationary || law == Law::switch_fixedtime_stationary ||
           law == Law::switch_predefined_stationary || law == Law::pip_baseline;
}

bool compensates_maneuver(Law law) {
    return law == Law::fixed_maneuvering || law == Law::switch_fixedtime_maneuvering ||
           law == Law::switch_predefined_maneuvering;
}

bool is_predefined_switched(Law law) {
    return law == Law::switch_predefined_maneuvering || law == Law::switch_predefined_constant ||
           law == Law::switch_predefined_stationary;
}

bool is_fixedtime(Law law) { return !is_predefined_switched(law); }

void validate_guidance(const GuidanceConfig& cfg) {
    if (!(cfg.ts > 0.0)) reject("ts > 0 violated");
    if (!(cfg.a_max > 0.0)) reject("a_max > 0 violated");
    if (!(cfg.boundary_layer >= 0.0)) reject("boundary_layer >= 0 violated");
    if (!(cfg.xi_max >= 0.0)) reject("xi_max >= 0 violated");
    if (!(cfg.bound_margin >= 0.0)) reject("bound_margin >= 0 violated");
    if (uses_stationary_geometry(cfg.law) && !(cfg.N_nav >= 3.0)) reject("N_nav >= 3 violated");
    if (is_fixedtime(cfg.law)) {
        if (!(cfg.c > 0.0 && cfg.c <= 1.0)) reject("c in (0,1] violated");
        if (!(cfg.d >= 1.0)) reject("d >= 1 violated");
        if (cfg.B && !(*cfg.B > 0.0)) reject("B > 0 violated");
        if (cfg.eps && !(*cfg.eps >= 0.0)) reject("eps >= 0 violated");
    } else {
        if (!(cfg.M_coef > 0.0)) reject("M_coef > 0 violated");
        if (!(cfg.N_coef > 0.0)) reject("N_coef > 0 violated");
        if (!(cfg.m_exp > 0.0)) reject("m_exp > 0 violated");
        if (!(cfg.n_exp > 0.0)) reject("n_exp > 0 violated");
        if (!(cfg.k_exp > 0.0)) reject("k_exp > 0 violated");
        if (!(cfg.k_exp * cfg.m_exp < 1.0)) reject("k_exp * m_exp < 1 violated");
        if (!(cfg.k_exp * cfg.n_exp > 1.0)) reject("k_exp * n_exp > 1 violated");
        if (cfg.P && !(*cfg.P > 0.0)) reject("P > 0 violated");
        if (cfg.mu && !(*cfg.mu >= 0.0)) reject("mu >= 0 violated");
    }
}

double omega_exp(double zeta_abs, double c) {
    const double zc = std::pow(zeta_abs, c);
    if (zc > kExpArgCap)
        throw Error(ErrorKind::overflow, "|zeta|^c = " + std::to_string(zc) + " exceeds 700");
    return std::exp(zc) * std::pow(zeta_abs, 2.0 - c) / c;
}

double omega_composite(double zeta, double c) {
    const double a = std::abs(zeta);
    if (a == 0.0) return 0.0;
    const double zc = std::min(std::pow(a, c), kExpArgCap);
    return sign(zeta) * std::exp(zc) * std::pow(a, 1.0 - c) / c;
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::domain, "gamma function needs a positive argument");
    return std::tgamma(x);
}

double predefined_gain(double ts, double M_coef, double N_coef, double m_exp, double n_exp,
                       double k_exp, double min_edges, double min_lambda2) {
    if (!(k_exp * m_exp < 1.0)) throw Error(ErrorKind::constraint, "k * m < 1 violated");
    if (!(k_exp * n_exp > 1.0)) throw Error(ErrorKind::constraint, "k * n > 1 violated");
    const double span = n_exp - m_exp;
    const double a = (1.0 - k_exp * m_exp) / span;
    const double b = (k_exp * n_exp - 1.0) / span;
    const double core = gamma_fn(a) * gamma_fn(b) / (ts * std::pow(M_coef, k_exp) * gamma_fn(k_exp) * span);
    return core * std::pow(M_coef / N_coef, a) * (min_edges / min_lambda2);
}

double fixedtime_gain(int n, double d, double lambda2, double ts) {
    return std::pow(static_cast<double>(n), 2.0 - d) / (lambda2 * ts);
}

double fixedtime_bound(double B_min, double lambda2, int n, double d) {
    return 1.0 / (B_min * lambda2 * std::pow(1.0 / static_cast<double>(n), 2.0 - d));
}

double epsilon_bound(double max_r_over_w, double xi_max) { return max_r_over_w * xi_max; }

double mu_bound(double P, double min_lambda2, double max_r_over_w, double xi_max) {
    return max_r_over_w * xi_max / (P * std::sqrt(min_lambda2));
}

double fixed_consensus_term(double zeta, double B, double c, double eps) {
    return B * omega_composite(zeta, c) + eps * sign(zeta);
}

double predefined_consensus_term(std::span<const double> tgos, const Topology& g, int i, double P,
                                 double M_coef, double N_coef, double m_exp, double n_exp,
                                 double k_exp, double mu, double boundary_layer) {
    const double own = tgos[static_cast<std::size_t>(i)];
    double U = 0.0;
    for (int j : g.adjacent(i)) {
        const double dj = tgos[static_cast<std::size_t>(j)] - own;
        const double a = std::abs(dj);
        if (a == 0.0) continue;
        const double s = boundary_layer > 0.0 ? dj / (a + boundary_layer) : sign(dj);
        const double poly = std::pow(M_coef * std::pow(a, m_exp) + N_coef * std::pow(a, n_exp), k_exp);
        U += (poly + mu) * s;
    }
    return P * U;
}

double deviated_command(const InterceptorKinematics& ik, const RelativeRates& rr,
                        const TargetModel& tgt, double U, double aT_hat, double theta_dot_floor) {
    const double nominal = ik.v * rr.theta_dot;
    if (std::abs(rr.theta_dot) < theta_dot_floor) return nominal;
    const double d = ik.gamma - ik.theta;
    const double cd = std::cos(d);
    const double w = ik.v * ik.v - tgt.v * tgt.v;
    const double gain = ik.v * w * cd * cd / (ik.r * ik.r * rr.theta_dot);
    const double comp = ik.v * std::sin(d + tgt.gamma - ik.theta) * cd / (ik.r * rr.theta_dot);
    return nominal - gain * U - comp * aT_hat;
}

double stationary_command(const InterceptorKinematics& ik, double U, double N, double sin2d_floor) {
    const double d = ik.gamma - ik.theta;
    const double K = 4.0 * N - 2.0;
    double s2 = std::sin(2.0 * d);
    if (std::abs(s2) < sin2d_floor) s2 = s2 < 0.0 ? -sin2d_floor : sin2d_floor;
    const double sd = std::sin(d);
    const double bracket = U - 1.0 + std::cos(d) * (1.0 - sd * sd / K);
    return ik.v * ik.v * K / (ik.r * s2) * bracket;
}

double saturate(double a, double a_max) { return std::clamp(a, -a_max, a_max); }

double cmd_fixed_maneuvering(const InterceptorKinematics& ik, const RelativeRates& rr,
                             const TargetModel& tgt, double zeta, double aT_hat,
                             const GuidanceConfig& cfg, double lambda2, int n) {
    const double B = cfg.B.value_or(fixedtime_gain(n, cfg.d, lambda2, cfg.ts));
    const double U = fixed_consensus_term(zeta, B, cfg.c, cfg.eps.value_or(0.0));
    return deviated_command(ik, rr, tgt, U, aT_hat, cfg.theta_dot_floor);
}

double cmd_fixed_constant(const InterceptorKinematics& ik, const RelativeRates& rr,
                          const TargetModel& tgt, double zeta, const GuidanceConfig& cfg,
                          double lambda2, int n) {
    const double B = cfg.B.value_or(fixedtime_gain(n, cfg.d, lambda2, cfg.ts));
    const double U = fixed_consensus_term(zeta, B, cfg.c, 0.0);
    return deviated_command(ik, rr, tgt, U, 0.0, cfg.theta_dot_floor);
}

double cmd_fixed_stationary(const InterceptorKinematics& ik, double zeta, const GuidanceConfig& cfg,
                            double lambda2, int n) {
    const double B = cfg.B.value_or(fixedtime_gain(n, cfg.d, lambda2, cfg.ts));
    const double U = fixed_consensus_term(zeta, B, cfg.c, 0.0);
    return stationary_command(ik, U, cfg.N_nav, cfg.sin2d_floor);
}

double cmd_switched_fixedtime(const InterceptorKinematics& ik, const RelativeRates& rr,
                              const TargetModel& tgt, double zeta, double aT_hat,
                              const GuidanceConfig& cfg, SwitchedVariant variant) {
    if (!cfg.B) throw Error(ErrorKind::invalid_gain, "switched fixed-time law needs B");
    if (variant == SwitchedVariant::stationary)
        return stationary_command(ik, fixed_consensus_term(zeta, *cfg.B, cfg.c, 0.0), cfg.N_nav,
                                  cfg.sin2d_floor);
    const bool man = variant == SwitchedVariant::maneuvering;
    const double U = fixed_consensus_term(zeta, *cfg.B, cfg.c, man ? cfg.eps.value_or(0.0) : 0.0);
    return deviated_command(ik, rr, tgt, U, man ? aT_hat : 0.0, cfg.theta_dot_floor);
}

double cmd_switched_predefined(const InterceptorKinematics& ik, const RelativeRates& rr,
                               const TargetModel& tgt, std::span<const double> tgos,
                               const Topology& g_active, int i, double aT_hat,
                               const GuidanceConfig& cfg, SwitchedVariant variant) {
    if (!cfg.P) throw Error(ErrorKind::invalid_gain, "switched predefined-time law needs P");
    const bool man = variant == SwitchedVariant::maneuvering;
    const double mu = man ? cfg.mu.value_or(0.0) : 0.0;
    const double U = predefined_consensus_term(tgos, g_active, i, *cfg.P, cfg.M_coef, cfg.N_coef,
                                               cfg.m_exp, cfg.n_exp, cfg.k_exp, mu, cfg.boundary_layer);
    if (variant == SwitchedVariant::stationary) return stationary_command(ik, U, cfg.N_nav, cfg.sin2d_floor);
    return deviated_command(ik, rr, tgt, U, man ? aT_hat : 0.0, cfg.theta_dot_floor);
}

Point pip_coords(const TargetModel& tgt, double tgo) {
    return {tgt.x + tgt.v * tgo * std::cos(tgt.gamma), tgt.y + tgt.v * tgo * std::sin(tgt.gamma)};
}

PipGeometry pip_geometry(const Point& p, double gamma, double v, const TargetModel& tgt, double N,
                         double tgo_guess, int max_iter, double tol) {
    PipGeometry g;
    g.virt.gamma = gamma;
    g.virt.v = v;
    double tgo = std::max(tgo_guess, 0.0);
    for (int it = 0; it < max_iter; ++it) {
        g.pip = pip_coords(tgt, tgo);
        const double dx = g.pip.x - p.x, dy = g.pip.y - p.y;
        g.virt.r = std::hypot(dx, dy);
        g.virt.theta = std::atan2(dy, dx);
        const double next = tgo_stationary(g.virt.r, g.virt.delta(), v, N);
        g.iterations = it + 1;
        const bool done = std::abs(next - tgo) < tol;
        tgo = next;
        if (done) break;
    }
    g.tgo = tgo;
    g.pip = pip_coords(tgt, tgo);
    const double dx = g.pip.x - p.x, dy = g.pip.y - p.y;
    g.virt.r = std::hypot(dx, dy);
    g.virt.theta = std::atan2(dy, dx);
    return g;
}

double range_on_consensus(double delta, double delta0, double r0, double N) {
    if (N < 3.0) throw Error(ErrorKind::invalid_gain, "navigation gain N must be >= 3");
    if (!(std::abs(delta0) < pi / 2) || std::abs(delta) > std::abs(delta0) + 1e-15)
        throw Error(ErrorKind::domain, "need |delta| <= |delta0| < pi/2");
    const double x = std::cos(delta);
    if (x >= 1.0) return 0.0;
    // d ln r / d x = 2 x^2 / ((1 - x)(x^2 + x - K)), integrated by partial fractions.
    const double K = 4.0 * N - 2.0;
    const double s = std::sqrt(1.0 + 4.0 * K);
    const double A = 2.0 / (2.0 - K);
    const double B = 2.0 * (K - 1.0) / (2.0 - K);
    const double C = A * K;
    auto F = [&](double c) {
        return -A * std::log(std::abs(1.0 - c)) + 0.5 * B * std::log(std::abs(c * c + c - K)) +
               (C - 0.5 * B) / s * std::log(std::abs((2.0 * c + 1.0 - s) / (2.0 * c + 1.0 + s)));
    };
    return r0 * std::exp(F(x) - F(std::cos(delta0)));
}

}  // namespace salvo
