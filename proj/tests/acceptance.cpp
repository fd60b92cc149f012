// Acceptance checks: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "salvo/error.hpp"
#include "salvo/estimation.hpp"
#include "salvo/guidance.hpp"
#include "salvo/network.hpp"
#include "salvo/simulator.hpp"
#include "salvo_cli/output.hpp"
#include "salvo_cli/scenario_io.hpp"

using namespace salvo;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok    " : "miss  ") + note);
    }
    void info(const std::string& note) { notes.push_back("      " + note); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Run {
    Scenario sc;
    SimLog log;
    double wall = 0.0;
};

std::map<std::string, Run>& cache() {
    static std::map<std::string, Run> runs;
    return runs;
}

const Run& run_preset(const std::string& name) {
    auto it = cache().find(name);
    if (it != cache().end()) return it->second;
    Run r;
    r.sc = cli::load_scenario(name).scenario;
    const auto t0 = std::chrono::steady_clock::now();
    r.log = run(r.sc);
    r.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cache().emplace(name, std::move(r)).first->second;
}

double first_exit(const SimLog& log) {
    double t = log.t_end;
    for (const auto& c : log.capture_times)
        if (c) t = std::min(t, *c);
    for (const auto& c : log.miss_times)
        if (c) t = std::min(t, *c);
    return t;
}

std::string describe(const SimLog& log) {
    std::ostringstream os;
    os << "consensus " << (log.consensus_time ? fmt("%.3f s", *log.consensus_time) : "none");
    if (log.T_f)
        os << fmt(", T_f %.3f s, spread %.4f s", *log.T_f, log.capture_spread());
    else {
        int caught = 0;
        double closest = 1e300;
        for (std::size_t i = 0; i < log.capture_times.size(); ++i) {
            if (log.capture_times[i]) ++caught;
            else closest = std::min(closest, log.closest_approach[i]);
        }
        os << fmt(", %d/%zu captured, best miss %.2f m", caught, log.capture_times.size(), closest);
    }
    return os.str();
}

// ------------------------------------------------------------------ criteria

Verdict initial_tgo() {
    Verdict v;
    const double th[] = {35, 25, 20, 30, 10}, ga[] = {0, 10, 30, 10, 15};
    const double want_dev[] = {53.77, 37.50, 28.05, 41.53, 26.39};
    for (int i = 0; i < 5; ++i) {
        const double d = wrap_pi(deg2rad(ga[i] - th[i]));
        const double got = tgo_deviated(1e4, d, deg2rad(th[i]), deg2rad(120.0), 400.0, 200.0);
        v.check(std::abs(got - want_dev[i]) <= 0.01, fmt("deviated #%d: %.4f s (want %.2f)", i + 1, got, want_dev[i]));
    }
    const double ths[] = {60, 150, 30, -60, 45}, gas[] = {30, 70, 90, -30, 45};
    const double want_st[] = {51.25, 54.84, 53.75, 51.25, 50.00};
    for (int i = 0; i < 5; ++i) {
        const double d = wrap_pi(deg2rad(gas[i] - ths[i]));
        const double got = tgo_stationary(1e4, d, 200.0, 3.0);
        v.check(std::abs(got - want_st[i]) <= 0.01, fmt("stationary #%d: %.4f s (want %.2f)", i + 1, got, want_st[i]));
    }
    return v;
}

Verdict spectra() {
    Verdict v;
    const double l2 = algebraic_connectivity(Topology::cycle(5));
    v.check(std::abs(l2 - 1.3820) <= 1e-4, fmt("lambda2(C5) = %.6f", l2));
    const SpectralSummary s = spectral_summary(run_preset("table2_stationary_switching").sc.network);
    v.check(std::abs(s.min_lambda2_family - 0.5188) <= 1e-4,
            fmt("min lambda2 over the switching family = %.6f", s.min_lambda2_family));
    return v;
}

struct Expect {
    const char* preset;
    double ts;
    double tf;
    bool tight_spread;
};

const std::vector<Expect>& reproduction_set() {
    static const std::vector<Expect> e = {
        {"table1_maneuvering", 7, 38, true},           {"table1_constant", 5, 39, true},
        {"table1_stationary", 1, 52, true},            {"table2_maneuvering_fixed", 2, 37, false},
        {"table2_constant_fixed", 5, 41, false},       {"table2_stationary_fixed", 3, 26, false},
        {"table2_maneuvering_switching", 2, 37, false}, {"table2_constant_switching", 5, 41, false},
        {"table2_stationary_switching", 3, 26, false},
    };
    return e;
}

bool reproduces(const Expect& e) {
    const Run& r = run_preset(e.preset);
    const SimLog& log = r.log;
    bool ok = log.consensus_time && *log.consensus_time <= e.ts && log.T_f && std::abs(*log.T_f - e.tf) <= 1.0 &&
              r.wall < 60.0;
    if (e.tight_spread) ok = ok && log.capture_spread() <= 0.05;
    return ok;
}

Verdict scenario_reproduction() {
    Verdict v;
    for (const auto& e : reproduction_set()) {
        const Run& r = run_preset(e.preset);
        v.check(reproduces(e), fmt("%-29s ts %g, T_f ~%g: %s, wall %.2f s", e.preset, e.ts, e.tf,
                                   describe(r.log).c_str(), r.wall));
    }
    return v;
}

Verdict stationary_timing() {
    Verdict v;
    const SimLog& log = run_preset("table1_stationary").log;
    const bool ok = log.consensus_time && std::abs(*log.consensus_time - 0.7) <= 0.15;
    v.check(ok, "table1_stationary consensus " +
                    (log.consensus_time ? fmt("%.3f s", *log.consensus_time) : std::string("none")) +
                    " (want 0.70 +- 0.15)");
    return v;
}

// d(tgo)/dt over 0.1 s windows between consensus and the first capture or miss.
double worst_tgo_rate_error(const SimLog& log, double from) {
    const double to = first_exit(log);
    double worst = 0.0;
    const double window = 0.1;
    for (int i = 0; i < log.n; ++i) {
        std::size_t a = 0;
        while (a < log.samples() && log.t[a] < from) ++a;
        std::size_t b = a;
        for (; a < log.samples(); ++a) {
            while (b < log.samples() && log.t[b] < log.t[a] + window) ++b;
            if (b >= log.samples() || log.t[b] >= to) break;
            const double rate = (log.at(b, i).tgo - log.at(a, i).tgo) / (log.t[b] - log.t[a]);
            worst = std::max(worst, std::abs(rate + 1.0));
        }
    }
    return worst;
}

double xi_rate_fd(const InterceptorKinematics& ik, const TargetModel& tgt, double a, double aT, TgoLaw law,
                  double N) {
    auto tgo = [&](const InterceptorKinematics& k, const TargetModel& t) {
        return law == TgoLaw::stationary ? tgo_stationary(k.r, k.delta(), k.v, N)
                                         : tgo_deviated(k.r, k.delta(), k.theta, t.gamma, k.v, t.v);
    };
    const RelativeRates rr = relative_rates(ik, tgt);
    auto shifted = [&](double h) {
        InterceptorKinematics k = ik;
        k.r += h * rr.r_dot;
        k.theta += h * rr.theta_dot;
        k.gamma += h * a / ik.v;
        TargetModel t = tgt;
        if (t.v > 0.0) t.gamma += h * aT / t.v;
        return tgo(k, t);
    };
    const double h = 1e-5;
    return 1.0 + (shifted(h) - shifted(-h)) / (2.0 * h);
}

Verdict property_suite() {
    Verdict v;
    std::vector<std::string> passing;
    for (const auto& e : reproduction_set())
        if (reproduces(e)) passing.push_back(e.preset);
    passing.push_back("airframe");

    // (a)
    {
        double worst = 0.0;
        std::string which;
        for (const auto& p : passing) {
            const SimLog& log = run_preset(p).log;
            if (!log.consensus_time || !log.all_captured()) continue;
            const double w = worst_tgo_rate_error(log, *log.consensus_time);
            v.info(fmt("(a) %-26s max |dtgo/dt + 1| = %.4f from consensus, %.4f from consensus + 1 s", p.c_str(), w,
                       worst_tgo_rate_error(log, *log.consensus_time + 1.0)));
            if (w > worst) {
                worst = w;
                which = p;
            }
        }
        v.check(worst <= 0.01, fmt("(a) post-consensus tgo rate within 0.01 of -1: worst %.4f (%s)", worst, which.c_str()));
    }
    // (b)
    for (const char* p : {"table1_constant", "table2_constant_fixed", "table2_constant_switching"}) {
        const SimLog& log = run_preset(p).log;
        if (!log.consensus_time) {
            v.check(false, fmt("(b) %s: no consensus", p));
            continue;
        }
        const double from = *log.consensus_time + 0.5, to = first_exit(log);
        double drift = 0.0;
        for (int i = 0; i < log.n; ++i) {
            double lo = 1e300, hi = -1e300;
            for (std::size_t k = 0; k < log.samples() && log.t[k] < to; ++k) {
                if (log.t[k] < from) continue;
                lo = std::min(lo, log.at(k, i).delta);
                hi = std::max(hi, log.at(k, i).delta);
            }
            drift = std::max(drift, hi - lo);
        }
        v.check(rad2deg(drift) <= 0.1, fmt("(b) %s: look-angle variation after consensus + 0.5 s = %.4f deg", p,
                                          rad2deg(drift)));
    }
    // (c)
    for (const char* p : {"table1_stationary", "table2_stationary_fixed", "table2_stationary_switching", "airframe"}) {
        const Run& run = run_preset(p);
        const SimLog& log = run.log;
        if (!log.consensus_time || !log.all_captured()) {
            v.check(false, fmt("(c) %s: no consensus or capture", p));
            continue;
        }
        const double to = first_exit(log);
        std::size_t k0 = 0;
        while (log.t[k0] < *log.consensus_time) ++k0;
        bool monotone = true, zero_early = false;
        double worst_rel = 0.0, late_break = -1.0, late_r = 0.0;
        for (int i = 0; i < log.n; ++i) {
            const double N = run.sc.interceptors[static_cast<std::size_t>(i)].N_nav.value_or(run.sc.guidance.N_nav);
            const double d0 = log.at(k0, i).delta, r0 = log.at(k0, i).r;
            double prev = std::abs(d0);
            for (std::size_t k = k0 + 1; k < log.samples() && log.t[k] < to; ++k) {
                const Sample& s = log.at(k, i);
                if (std::abs(s.delta) > prev + 1e-12) {
                    monotone = false;
                    if (late_break < 0.0 && log.t[k] > *log.consensus_time + 1.0) {
                        late_break = log.t[k];
                        late_r = s.r;
                    }
                }
                if (s.delta == 0.0) zero_early = true;
                prev = std::abs(s.delta);
                if (s.r > 0.05 * r0 && std::abs(s.delta) <= std::abs(d0)) {
                    const double model = range_on_consensus(s.delta, d0, r0, N);
                    worst_rel = std::max(worst_rel, std::abs(model - s.r) / s.r);
                }
            }
        }
        v.check(monotone && !zero_early, fmt("(c) %s: |delta| non-increasing after consensus, nonzero before capture", p));
        if (late_break >= 0.0)
            v.info(fmt("(c) %s: first increase later than consensus + 1 s at t = %.3f s, r = %.2f m", p, late_break, late_r));
        v.check(worst_rel <= 0.01, fmt("(c) %s: range vs closed-form consensus curve, worst %.3f%% (r > 5%% of r at consensus)",
                                       p, 100 * worst_rel));
    }
    // (d)
    {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const bool st = k % 2 == 1;
            InterceptorKinematics ik;
            ik.r = 500.0 + 9500.0 * U(rng);
            ik.theta = -pi + 2 * pi * U(rng);
            ik.gamma = ik.theta + deg2rad(-70.0 + 140.0 * U(rng));
            ik.v = 250.0 + 250.0 * U(rng);
            TargetModel tgt;
            tgt.kind = st ? TargetKind::stationary : TargetKind::maneuvering;
            tgt.v = st ? 0.0 : 50.0 + 150.0 * U(rng);
            tgt.gamma = -pi + 2 * pi * U(rng);
            const double a = -100.0 + 200.0 * U(rng), aT = st ? 0.0 : -30.0 + 60.0 * U(rng);
            const TgoLaw law = st ? TgoLaw::stationary : TgoLaw::deviated_pursuit;
            const double an = xi_rate_diagnostic(ik, tgt, a, aT, law, 3.0);
            const double fd = xi_rate_fd(ik, tgt, a, aT, law, 3.0);
            worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(fd)));
        }
        v.check(worst < 1e-3, fmt("(d) analytic vs finite-difference error-rate, 100 states: worst rel %.2e", worst));
    }
    // (e)
    {
        Scenario sc = run_preset("table1_stationary").sc;
        const SimLog& base = run_preset("table1_stationary").log;
        sc.dt /= 2;
        const SimLog half = run(sc);
        double worst = base.all_captured() && half.all_captured() ? 0.0 : 1e300;
        for (std::size_t i = 0; i < base.capture_times.size() && worst < 1e300; ++i)
            worst = std::max(worst, std::abs(*base.capture_times[i] - *half.capture_times[i]));
        v.check(worst < 1e-3, fmt("(e) step halving on table1_stationary moves capture times by %.3e s", worst));
    }
    // (f)
    {
        auto csv = [](const char* preset) {
            const SimLog log = run(cli::load_scenario(preset).scenario);
            std::ostringstream os;
            cli::write_timeseries(os, log, 10);
            return os.str();
        };
        const std::string a = csv("table2_stationary_switching"), b = csv("table2_stationary_switching");
        v.check(a == b && !a.empty(), fmt("(f) repeated seeded run gives byte-identical CSV (%zu bytes)", a.size()));
    }
    // (g)
    {
        std::vector<std::string> late;
        for (const auto& p : cli::presets()) {
            const Run& r = run_preset(std::string(p.name));
            const bool ok = r.log.consensus_time && *r.log.consensus_time <= r.sc.guidance.ts;
            if (!ok)
                late.push_back(std::string(p.name) + " (" +
                               (r.log.consensus_time ? fmt("%.3f s", *r.log.consensus_time) : std::string("none")) +
                               " vs ts " + fmt("%g", r.sc.guidance.ts) + ")");
        }
        std::string list;
        for (const auto& l : late) list += (list.empty() ? "" : ", ") + l;
        v.check(late.empty(), "(g) saturated runs reach consensus by ts on every preset" +
                                  (late.empty() ? std::string() : ": late " + list));
    }
    return v;
}

Verdict observer_accuracy() {
    Verdict v;
    const Run& r = run_preset("table1_maneuvering");
    const SimLog& log = r.log;
    const double to = first_exit(log) - 1.0;
    double worst = 0.0, at = 0.0;
    for (std::size_t k = 0; k < log.samples() && log.t[k] < to; ++k) {
        if (log.t[k] <= 5.0) continue;
        const double aT = r.sc.target.accel_at(log.t[k]);
        for (int i = 0; i < log.n; ++i) {
            const double e = std::abs(log.at(k, i).aT_hat - aT);
            if (e > worst) {
                worst = e;
                at = log.t[k];
            }
        }
    }
    v.check(worst < 0.5, fmt("table1_maneuvering: max |aT_hat - aT| for 5 s < t < first capture - 1 s = %.3f m/s^2 (at t = %.2f s)",
                             worst, at));
    return v;
}

struct Effort {
    double peak = 0.0;
    double saturated = 0.0;  // agent-seconds at the limit
};

Effort transient_effort(const Run& r, double until) {
    Effort e;
    const double dt = r.sc.dt * r.sc.log_every;
    for (std::size_t k = 0; k < r.log.samples() && r.log.t[k] < until; ++k)
        for (int i = 0; i < r.log.n; ++i) {
            const double a = std::abs(r.log.at(k, i).a_cmd);
            e.peak = std::max(e.peak, a);
            if (a >= r.sc.guidance.a_max * (1 - 1e-12)) e.saturated += dt;
        }
    return e;
}

Verdict pip_comparison() {
    Verdict v;
    const Run& pip = run_preset("pip_comparison");
    const Run& dp = run_preset("table1_constant");
    v.check(pip.log.all_captured() && pip.log.capture_spread() <= 0.05, "pip_comparison: " + describe(pip.log));
    const bool near5 = pip.log.consensus_time && std::abs(*pip.log.consensus_time - 5.0) <= 1.0;
    v.check(near5, "pip_comparison consensus within 1 s of ts = 5 s");
    const double ts = pip.sc.guidance.ts;
    const Effort ep = transient_effort(pip, ts), ed = transient_effort(dp, ts);
    const double lim = pip.sc.guidance.a_max * (1 - 1e-12);
    const bool larger = ep.peak > ed.peak || (ep.peak >= lim && ed.peak >= lim && ep.saturated > ed.saturated);
    v.check(larger, fmt("transient (t < %g s) peak |a| %.1f g vs %.1f g, time at the limit %.2f vs %.2f agent-s", ts,
                        ep.peak / g0, ed.peak / g0, ep.saturated, ed.saturated));
    return v;
}

Verdict airframe_loop() {
    Verdict v;
    const Run& r = run_preset("airframe");
    const SimLog& log = r.log;
    v.check(log.consensus_time && *log.consensus_time <= 3.0 && log.all_captured() && log.capture_spread() <= 0.05,
            "airframe: " + describe(log));
    double lag = 0.0;
    for (std::size_t k = 0; k < log.samples(); ++k)
        for (int i = 0; i < log.n; ++i) lag = std::max(lag, std::abs(log.at(k, i).a_cmd - log.at(k, i).a_real));
    v.info(fmt("largest |a_cmd - a_real| %.2f m/s^2", lag));
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"initial time-to-go", initial_tgo},
        {"graph spectra", spectra},
        {"scenario reproduction", scenario_reproduction},
        {"stationary consensus timing", stationary_timing},
        {"property suite", property_suite},
        {"observer accuracy", observer_accuracy},
        {"pip comparison", pip_comparison},
        {"airframe in the loop", airframe_loop},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.notes.push_back(std::string("error ") + e.what());
        }
        std::printf("%s  %s\n", v.pass ? "PASS" : "FAIL", name);
        for (const auto& n : v.notes) std::printf("        %s\n", n.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
