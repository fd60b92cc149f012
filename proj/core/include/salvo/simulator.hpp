#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "salvo/airframe.hpp"
#include "salvo/engagement.hpp"
#include "salvo/estimation.hpp"
#include "salvo/guidance.hpp"
#include "salvo/network.hpp"

namespace salvo {

struct InterceptorSpec {
    InterceptorKinematics initial;
    std::optional<double> B;
    std::optional<double> P;
    std::optional<double> N_nav;
};

struct Scenario {
    std::string name;
    std::vector<InterceptorSpec> interceptors;
    TargetModel target;
    SwitchingSchedule network;
    GuidanceConfig guidance;
    ObserverGains observer;
    // Unset: run the observer exactly when the law compensates a maneuver.
    std::optional<bool> observer_enabled;
    std::optional<AirframeParams> airframe;
    double dt = 1e-3;
    double t_max = 120.0;
    double capture_radius = 1.0;
    double miss_gate = 100.0;  // receding inside this range counts as a miss
    double spread_tol = 0.1;
    std::uint64_t seed = 0;
    int log_every = 1;
};

// Throws Error(validation) naming the first violated invariant.
void validate_scenario(const Scenario& sc);

struct DerivedGains {
    double lambda2 = 0.0;
    double min_lambda2 = 0.0;
    int min_edges = 0;
    std::vector<double> B;  // per interceptor, exponential laws
    std::vector<double> P;  // per interceptor, polynomial laws
    double P_min = 0.0;     // lower bound for P from the settling-time design
    bool eps_tracks_range = false;
    double eps = 0.0;       // constant value, or the value at t = 0 when tracking
    bool mu_tracks_range = false;
    double mu = 0.0;
    double fixedtime_bound = 0.0;  // guaranteed settling bound of the exponential laws, s
    std::vector<std::string> warnings;
};

DerivedGains derive_gains(const Scenario& sc);

struct Sample {
    double r, theta, gamma, delta, tgo, a_cmd, a_real, aT_hat, x, y;
};

struct SimLog {
    int n = 0;
    std::vector<double> t;
    std::vector<int> topo;        // one-based active graph index
    std::vector<Sample> rows;     // t.size() * n, sample-major
    std::vector<double> target_x, target_y;

    std::optional<double> consensus_time;
    std::vector<std::optional<double>> capture_times;
    std::vector<std::optional<double>> miss_times;  // when the range started to grow inside miss_gate
    std::vector<double> closest_approach;
    std::vector<bool> missed;
    std::optional<double> T_f;  // mean capture time, set only if every interceptor was captured
    double t_end = 0.0;
    DerivedGains gains;
    std::vector<std::string> warnings;

    const Sample& at(std::size_t k, int i) const { return rows[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]; }
    std::size_t samples() const { return t.size(); }
    bool all_captured() const;
    double capture_spread() const;  // max - min capture time; NaN unless all captured
};

// First logged time after which max tgo - min tgo stays <= tol on every
// logged sample before the first capture or miss; nullopt if that never happens.
std::optional<double> consensus_time(const SimLog& log, double tol);

// Runs a validated scenario. Throws Error(non_finite) with a state dump if the
// integration diverges.
SimLog run(const Scenario& sc);

}  // namespace salvo
