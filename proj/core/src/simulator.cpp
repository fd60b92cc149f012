#include "salvo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "salvo/error.hpp"

namespace salvo {

namespace {

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorKind::validation, what); }

std::string agent_label(std::size_t i) { return "interceptor " + std::to_string(i + 1); }

double max_r_over_w(const std::vector<InterceptorKinematics>& iks, const std::vector<char>& active,
                    double vT) {
    double m = 0.0;
    for (std::size_t i = 0; i < iks.size(); ++i)
        if (active[i]) m = std::max(m, iks[i].r / (iks[i].v * iks[i].v - vT * vT));
    return m;
}

SwitchedVariant variant_of(Law law) {
    switch (law) {
        case Law::switch_fixedtime_maneuvering:
        case Law::switch_predefined_maneuvering:
        case Law::fixed_maneuvering: return SwitchedVariant::maneuvering;
        case Law::switch_predefined_constant:
        case Law::fixed_constant: return SwitchedVariant::constant;
        default: return SwitchedVariant::stationary;
    }
}

// Smooth states advanced by RK4: per interceptor (r, theta, gamma), then the
// target (x, y, gamma_T).
struct World {
    std::vector<double> r, theta, gamma;
    double tx = 0.0, ty = 0.0, tgamma = 0.0;
};

struct Rates {
    std::vector<double> r, theta, gamma;
    double tx = 0.0, ty = 0.0, tgamma = 0.0;
};

void world_rates(const World& w, const std::vector<double>& v, const std::vector<double>& accel,
                 const std::vector<char>& active, const TargetModel& tgt, double t, Rates& out) {
    const std::size_t n = w.r.size();
    const double aT = tgt.accel_at(t);
    out.tgamma = tgt.v > 0.0 ? aT / tgt.v : 0.0;
    out.tx = tgt.v * std::cos(w.tgamma);
    out.ty = tgt.v * std::sin(w.tgamma);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) {
            out.r[i] = out.theta[i] = out.gamma[i] = 0.0;
            continue;
        }
        const double bearing = w.tgamma - w.theta[i];
        const double d = w.gamma[i] - w.theta[i];
        out.r[i] = tgt.v * std::cos(bearing) - v[i] * std::cos(d);
        out.theta[i] = w.r[i] > 1e-9 ? (tgt.v * std::sin(bearing) - v[i] * std::sin(d)) / w.r[i] : 0.0;
        out.gamma[i] = accel[i] / v[i];
    }
}

void axpy(const World& base, const Rates& k, double h, World& out) {
    for (std::size_t i = 0; i < base.r.size(); ++i) {
        out.r[i] = base.r[i] + h * k.r[i];
        out.theta[i] = base.theta[i] + h * k.theta[i];
        out.gamma[i] = base.gamma[i] + h * k.gamma[i];
    }
    out.tx = base.tx + h * k.tx;
    out.ty = base.ty + h * k.ty;
    out.tgamma = base.tgamma + h * k.tgamma;
}

}  // namespace

void validate_scenario(const Scenario& sc) {
    const std::size_t n = sc.interceptors.size();
    if (n < 2) reject("at least two interceptors required");
    if (!(sc.dt > 0.0)) reject("dt > 0 violated");
    if (!(sc.t_max > 0.0)) reject("t_max > 0 violated");
    if (!(sc.capture_radius > 0.0)) reject("capture_radius > 0 violated");
    if (!(sc.miss_gate >= sc.capture_radius)) reject("miss_gate >= capture_radius violated");
    if (!(sc.spread_tol > 0.0)) reject("spread_tol > 0 violated");
    if (sc.log_every < 1) reject("log_every >= 1 violated");

    const TargetModel& tgt = sc.target;
    if (tgt.kind == TargetKind::stationary && tgt.v != 0.0) reject("stationary target must have v_T = 0");
    if (!(tgt.v >= 0.0)) reject("v_T >= 0 violated");

    validate_guidance(sc.guidance);
    const Law law = sc.guidance.law;
    if (uses_stationary_geometry(law) && law != Law::pip_baseline && tgt.kind != TargetKind::stationary)
        reject(std::string("law ") + to_string(law) + " requires a stationary target");
    if (law == Law::pip_baseline && tgt.kind == TargetKind::maneuvering)
        reject("pip_baseline assumes a non-maneuvering target");

    if (sc.network.graphs().empty()) reject("network has no graphs");
    if (sc.network.n() != static_cast<int>(n))
        reject("network has " + std::to_string(sc.network.n()) + " vertices but there are " +
               std::to_string(n) + " interceptors");
    for (std::size_t k = 0; k < sc.network.graphs().size(); ++k)
        if (!is_connected(sc.network.graphs()[k]))
            reject("graph " + std::to_string(k + 1) + " is not connected");

    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = sc.interceptors[i];
        const auto& ik = s.initial;
        if (!(ik.v > 0.0)) reject(agent_label(i) + ": v > 0 violated");
        if (!(ik.v > tgt.v)) reject(agent_label(i) + ": v > v_T violated");
        if (!(ik.r > sc.capture_radius)) reject(agent_label(i) + ": initial range inside capture radius");
        if (!(std::abs(ik.delta()) < pi / 2)) reject(agent_label(i) + ": |delta(0)| < 90 deg violated");
        if (s.B && !(*s.B > 0.0)) reject(agent_label(i) + ": B > 0 violated");
        if (s.P && !(*s.P > 0.0)) reject(agent_label(i) + ": P > 0 violated");
        if (s.N_nav && !(*s.N_nav >= 3.0)) reject(agent_label(i) + ": N_nav >= 3 violated");
    }
    if (sc.observer_enabled.value_or(compensates_maneuver(law))) sc.observer.validate();
    if (sc.airframe) sc.airframe->validate();
}

DerivedGains derive_gains(const Scenario& sc) {
    const GuidanceConfig& cfg = sc.guidance;
    const int n = static_cast<int>(sc.interceptors.size());
    DerivedGains g;
    const SpectralSummary ss = spectral_summary(sc.network);
    g.lambda2 = ss.lambda2;
    g.min_lambda2 = ss.min_lambda2_family;
    g.min_edges = ss.min_edges_family;

    const bool switched = cfg.law == Law::switch_fixedtime_maneuvering || cfg.law == Law::switch_fixedtime_stationary;
    const double lam = switched ? g.min_lambda2 : g.lambda2;

    std::vector<InterceptorKinematics> iks;
    for (const auto& s : sc.interceptors) iks.push_back(s.initial);
    const std::vector<char> all(iks.size(), 1);
    const double rw0 = max_r_over_w(iks, all, sc.target.v);
    const double strict = 1.0 + cfg.bound_margin;

    if (is_fixedtime(cfg.law)) {
        const double B_auto = fixedtime_gain(n, cfg.d, lam, cfg.ts);
        double B_min = std::numeric_limits<double>::infinity();
        for (const auto& s : sc.interceptors) {
            g.B.push_back(s.B.value_or(cfg.B.value_or(B_auto)));
            B_min = std::min(B_min, g.B.back());
        }
        g.fixedtime_bound = fixedtime_bound(B_min, lam, n, cfg.d);
        if (g.fixedtime_bound > cfg.ts * (1.0 + 1e-12))
            g.warnings.push_back("gain B = " + std::to_string(B_min) + " only guarantees consensus by " +
                                 std::to_string(g.fixedtime_bound) + " s, later than ts");
        if (compensates_maneuver(cfg.law)) {
            const double bound0 = epsilon_bound(rw0, cfg.xi_max);
            if (cfg.eps) {
                g.eps = *cfg.eps;
                if (g.eps <= bound0)
                    g.warnings.push_back("eps = " + std::to_string(g.eps) +
                                         " does not exceed the robustness bound " + std::to_string(bound0) +
                                         " at the initial ranges");
            } else {
                g.eps_tracks_range = true;
                g.eps = strict * bound0;
            }
        }
    } else {
        g.P_min = predefined_gain(cfg.ts, cfg.M_coef, cfg.N_coef, cfg.m_exp, cfg.n_exp, cfg.k_exp,
                                  g.min_edges, g.min_lambda2);
        double P_low = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sc.interceptors.size(); ++i) {
            const auto& s = sc.interceptors[i];
            g.P.push_back(s.P.value_or(cfg.P.value_or(g.P_min)));
            P_low = std::min(P_low, g.P.back());
            if (g.P.back() < g.P_min)
                g.warnings.push_back(agent_label(i) + ": P = " + std::to_string(g.P.back()) +
                                     " is below the settling-time bound " + std::to_string(g.P_min));
        }
        if (compensates_maneuver(cfg.law)) {
            const double bound0 = mu_bound(P_low, g.min_lambda2, rw0, cfg.xi_max);
            if (cfg.mu) {
                g.mu = *cfg.mu;
                if (g.mu <= bound0)
                    g.warnings.push_back("mu = " + std::to_string(g.mu) + " does not exceed the bound " +
                                         std::to_string(bound0) + " at the initial ranges");
            } else {
                g.mu_tracks_range = true;
                g.mu = strict * bound0;
            }
        }
    }
    return g;
}

bool SimLog::all_captured() const {
    return !capture_times.empty() &&
           std::all_of(capture_times.begin(), capture_times.end(), [](const auto& c) { return c.has_value(); });
}

double SimLog::capture_spread() const {
    if (!all_captured()) return std::numeric_limits<double>::quiet_NaN();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : capture_times) {
        lo = std::min(lo, *c);
        hi = std::max(hi, *c);
    }
    return hi - lo;
}

std::optional<double> consensus_time(const SimLog& log, double tol) {
    double first_capture = std::numeric_limits<double>::infinity();
    for (const auto& c : log.capture_times)
        if (c) first_capture = std::min(first_capture, *c);
    for (const auto& c : log.miss_times)
        if (c) first_capture = std::min(first_capture, *c);
    std::optional<std::size_t> last_bad;
    std::size_t last_considered = 0;
    bool any = false;
    for (std::size_t k = 0; k < log.samples() && log.t[k] < first_capture; ++k) {
        any = true;
        last_considered = k;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < log.n; ++i) {
            lo = std::min(lo, log.at(k, i).tgo);
            hi = std::max(hi, log.at(k, i).tgo);
        }
        if (hi - lo > tol) last_bad = k;
    }
    if (!any) return std::nullopt;
    if (!last_bad) return log.t.front();
    if (*last_bad >= last_considered) return std::nullopt;
    return log.t[*last_bad + 1];
}

SimLog run(const Scenario& sc) {
    const GuidanceConfig& cfg = sc.guidance;
    const Law law = cfg.law;
    const std::size_t n = sc.interceptors.size();
    const int ni = static_cast<int>(n);
    const bool stationary_geom = uses_stationary_geometry(law);
    const bool use_observer = sc.observer_enabled.value_or(compensates_maneuver(law));
    const double dt = sc.dt;

    SimLog log;
    log.n = ni;
    log.gains = derive_gains(sc);
    log.warnings = log.gains.warnings;
    log.capture_times.assign(n, std::nullopt);
    log.missed.assign(n, false);
    log.miss_times.assign(n, std::nullopt);

    TargetModel tgt = sc.target;
    std::vector<double> v(n), N_nav(n);
    World w;
    w.r.resize(n);
    w.theta.resize(n);
    w.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = sc.interceptors[i];
        v[i] = s.initial.v;
        N_nav[i] = s.N_nav.value_or(cfg.N_nav);
        w.r[i] = s.initial.r;
        w.theta[i] = s.initial.theta;
        w.gamma[i] = s.initial.gamma;
    }
    w.tx = tgt.x;
    w.ty = tgt.y;
    w.tgamma = tgt.gamma;

    std::vector<char> active(n, 1);
    std::vector<ObserverState> obs(n);
    std::vector<double> aT_hat(n, 0.0);
    std::vector<AirframeState> air(n);
    std::vector<double> tgo(n, 0.0), a_cmd(n, 0.0), a_real(n, 0.0);
    std::vector<RelativeRates> rr(n);
    std::vector<PipGeometry> pip(n);
    std::vector<char> delta_warned(n, 0);
    std::vector<Sample> frozen(n);
    log.closest_approach = w.r;

    auto kin = [&](std::size_t i) { return InterceptorKinematics{w.r[i], w.theta[i], w.gamma[i], v[i]}; };
    auto sync_target = [&] {
        tgt.x = w.tx;
        tgt.y = w.ty;
        tgt.gamma = w.tgamma;
    };

    if (use_observer) {
        for (std::size_t i = 0; i < n; ++i) obs[i] = observer_init(relative_rates(kin(i), tgt).v_theta);
    }

    const auto steps = static_cast<long long>(std::ceil(sc.t_max / dt - 1e-9));
    std::optional<long long> last_bad;
    long long first_capture_step = -1;
    bool any_bad = false;

    World stage = w, next = w;
    Rates k1, k2, k3, k4;
    for (Rates* k : {&k1, &k2, &k3, &k4}) {
        k->r.resize(n);
        k->theta.resize(n);
        k->gamma.resize(n);
    }

    long long step = 0;
    for (; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        sync_target();
        const int topo = sc.network.index_at(t);
        const Topology& g = sc.network.graphs()[static_cast<std::size_t>(topo)];

        // Time-to-go for everybody first: the consensus terms need all of them.
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) {
                tgo[i] = 0.0;
                continue;
            }
            const InterceptorKinematics ik = kin(i);
            rr[i] = relative_rates(ik, tgt);
            const double d = ik.delta();
            if (!delta_warned[i] && std::abs(d) >= pi / 2) {
                delta_warned[i] = 1;
                log.warnings.push_back(agent_label(i) + ": |delta| reached 90 deg at t = " + std::to_string(t));
            }
            if (law == Law::pip_baseline) {
                const Point p = interceptor_position(ik, tgt);
                const double guess = step == 0 ? ik.r / v[i] : tgo[i];
                pip[i] = pip_geometry(p, ik.gamma, v[i], tgt, N_nav[i], guess);
                tgo[i] = pip[i].tgo;
            } else if (stationary_geom) {
                tgo[i] = tgo_stationary(ik.r, d, v[i], N_nav[i]);
            } else {
                tgo[i] = tgo_deviated(ik.r, d, ik.theta, tgt.gamma, v[i], tgt.v);
            }
        }

        double eps = log.gains.eps, mu = log.gains.mu;
        if (log.gains.eps_tracks_range || log.gains.mu_tracks_range) {
            std::vector<InterceptorKinematics> iks;
            for (std::size_t i = 0; i < n; ++i) iks.push_back(kin(i));
            const double rw = max_r_over_w(iks, active, tgt.v);
            const double strict = 1.0 + cfg.bound_margin;
            if (log.gains.eps_tracks_range) eps = strict * epsilon_bound(rw, cfg.xi_max);
            if (log.gains.mu_tracks_range) {
                const double P_low = *std::min_element(log.gains.P.begin(), log.gains.P.end());
                mu = strict * mu_bound(P_low, log.gains.min_lambda2, rw, cfg.xi_max);
            }
        }

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) {
                a_cmd[i] = a_real[i] = 0.0;
                continue;
            }
            lo = std::min(lo, tgo[i]);
            hi = std::max(hi, tgo[i]);
            const InterceptorKinematics ik = kin(i);
            double a = 0.0;
            if (is_fixedtime(law)) {
                const double zeta = disagreement(tgo, g, static_cast<int>(i) + 1);
                const double B = log.gains.B[i];
                if (law == Law::pip_baseline) {
                    const double U = fixed_consensus_term(zeta, B, cfg.c, 0.0);
                    a = stationary_command(pip[i].virt, U, N_nav[i], cfg.sin2d_floor);
                } else if (stationary_geom) {
                    a = stationary_command(ik, fixed_consensus_term(zeta, B, cfg.c, 0.0), N_nav[i], cfg.sin2d_floor);
                } else {
                    const bool man = compensates_maneuver(law);
                    const double U = fixed_consensus_term(zeta, B, cfg.c, man ? eps : 0.0);
                    a = deviated_command(ik, rr[i], tgt, U, man ? aT_hat[i] : 0.0, cfg.theta_dot_floor);
                }
            } else {
                const SwitchedVariant var = variant_of(law);
                const double U = predefined_consensus_term(
                    tgo, g, static_cast<int>(i), log.gains.P[i], cfg.M_coef, cfg.N_coef, cfg.m_exp, cfg.n_exp,
                    cfg.k_exp, var == SwitchedVariant::maneuvering ? mu : 0.0, cfg.boundary_layer);
                if (var == SwitchedVariant::stationary)
                    a = stationary_command(ik, U, N_nav[i], cfg.sin2d_floor);
                else
                    a = deviated_command(ik, rr[i], tgt, U, var == SwitchedVariant::maneuvering ? aT_hat[i] : 0.0,
                                         cfg.theta_dot_floor);
            }
            a_cmd[i] = saturate(a, cfg.a_max);
            if (sc.airframe) {
                const AirframeStep st = airframe_step(air[i], a_cmd[i], *sc.airframe, v[i], dt);
                air[i] = st.state;
                a_real[i] = st.a_real;
            } else {
                a_real[i] = a_cmd[i];
            }
        }

        // Consensus bookkeeping at full rate, only until the first capture.
        if (first_capture_step < 0) {
            any_bad = any_bad || hi - lo > sc.spread_tol;
            if (hi - lo > sc.spread_tol) last_bad = step;
        }

        if (step % sc.log_every == 0) {
            log.t.push_back(t);
            log.topo.push_back(topo + 1);
            log.target_x.push_back(tgt.x);
            log.target_y.push_back(tgt.y);
            for (std::size_t i = 0; i < n; ++i) {
                if (!active[i]) {
                    log.rows.push_back(frozen[i]);
                    continue;
                }
                const InterceptorKinematics ik = kin(i);
                const Point p = interceptor_position(ik, tgt);
                log.rows.push_back({ik.r, ik.theta, ik.gamma, ik.delta(), tgo[i], a_cmd[i], a_real[i], aT_hat[i], p.x, p.y});
            }
        }

        if (use_observer) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!active[i]) continue;
                const InterceptorKinematics ik = kin(i);
                const ObserverStep os = observer_step(obs[i], sc.observer, rr[i].theta_dot, ik.r, rr[i].r_dot,
                                                      ik.gamma - ik.theta, a_real[i], tgt.gamma - ik.theta, dt);
                obs[i] = os.state;
                aT_hat[i] = os.aT_hat;
            }
        }

        world_rates(w, v, a_real, active, tgt, t, k1);
        axpy(w, k1, dt / 2, stage);
        world_rates(stage, v, a_real, active, tgt, t + dt / 2, k2);
        axpy(w, k2, dt / 2, stage);
        world_rates(stage, v, a_real, active, tgt, t + dt / 2, k3);
        axpy(w, k3, dt, stage);
        world_rates(stage, v, a_real, active, tgt, t + dt, k4);
        for (std::size_t i = 0; i < n; ++i) {
            next.r[i] = w.r[i] + dt / 6 * (k1.r[i] + 2 * k2.r[i] + 2 * k3.r[i] + k4.r[i]);
            next.theta[i] = w.theta[i] + dt / 6 * (k1.theta[i] + 2 * k2.theta[i] + 2 * k3.theta[i] + k4.theta[i]);
            next.gamma[i] = w.gamma[i] + dt / 6 * (k1.gamma[i] + 2 * k2.gamma[i] + 2 * k3.gamma[i] + k4.gamma[i]);
        }
        next.tx = w.tx + dt / 6 * (k1.tx + 2 * k2.tx + 2 * k3.tx + k4.tx);
        next.ty = w.ty + dt / 6 * (k1.ty + 2 * k2.ty + 2 * k3.ty + k4.ty);
        next.tgamma = w.tgamma + dt / 6 * (k1.tgamma + 2 * k2.tgamma + 2 * k3.tgamma + k4.tgamma);

        bool finite = std::isfinite(next.tx) && std::isfinite(next.ty) && std::isfinite(next.tgamma);
        for (std::size_t i = 0; i < n && finite; ++i)
            finite = std::isfinite(next.r[i]) && std::isfinite(next.theta[i]) && std::isfinite(next.gamma[i]);
        if (!finite) {
            std::ostringstream dump;
            dump.precision(17);
            dump << "integration diverged at t = " << t << "; last good state:";
            for (std::size_t i = 0; i < n; ++i)
                dump << " [" << i + 1 << ": r=" << w.r[i] << " theta=" << w.theta[i] << " gamma=" << w.gamma[i]
                     << " a=" << a_real[i] << "]";
            dump << " target=(" << w.tx << ", " << w.ty << ", " << w.tgamma << ")";
            throw Error(ErrorKind::non_finite, dump.str());
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) {
                next.r[i] = w.r[i];
                next.theta[i] = w.theta[i];
                next.gamma[i] = w.gamma[i];
                continue;
            }
            log.closest_approach[i] = std::min(log.closest_approach[i], next.r[i]);
            const bool captured = next.r[i] <= sc.capture_radius;
            const bool receding = next.r[i] > w.r[i] && w.r[i] < sc.miss_gate;
            if (!captured && !receding) continue;
            if (captured) {
                log.capture_times[i] = t + dt * (w.r[i] - sc.capture_radius) / (w.r[i] - next.r[i]);
                if (first_capture_step < 0) first_capture_step = step;
            } else {
                log.missed[i] = true;
                log.miss_times[i] = t + dt;
                if (first_capture_step < 0) first_capture_step = step;
                log.warnings.push_back(agent_label(i) + " missed: closest approach " +
                                       std::to_string(log.closest_approach[i]) + " m");
            }
            active[i] = 0;
            const InterceptorKinematics ik{next.r[i], next.theta[i], next.gamma[i], v[i]};
            TargetModel tn = tgt;
            tn.x = next.tx;
            tn.y = next.ty;
            const Point p = interceptor_position(ik, tn);
            frozen[i] = {ik.r, ik.theta, ik.gamma, ik.delta(), 0.0, 0.0, 0.0, aT_hat[i], p.x, p.y};
        }
        std::swap(w, next);

        if (std::none_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
            ++step;
            break;
        }
    }
    log.t_end = static_cast<double>(step) * dt;

    // Samples considered for consensus: every step up to and including the one
    // in which the first interceptor was captured or missed (or all steps).
    const long long considered_last = first_capture_step >= 0 ? first_capture_step : step - 1;
    if (!any_bad) {
        log.consensus_time = 0.0;
    } else if (*last_bad < considered_last) {
        log.consensus_time = static_cast<double>(*last_bad + 1) * dt;
    }

    if (log.all_captured()) {
        double s = 0.0;
        for (const auto& c : log.capture_times) s += *c;
        log.T_f = s / static_cast<double>(n);
    }
    return log;
}

}  // namespace salvo
