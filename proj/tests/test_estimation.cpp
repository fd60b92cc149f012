#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "salvo/error.hpp"
#include "salvo/estimation.hpp"

using namespace salvo;

namespace {

// Straight-flying interceptor against a target with lateral acceleration aT(t);
// the observer sees the exact relative state at every step.
struct ObserverTrace {
    std::vector<double> t, err, est;
};

ObserverTrace observe(const std::function<double(double)>& aT, double t_end, double gT_deg = 120.0,
                      double dt = 1e-3) {
    const ObserverGains gains;
    double r = 1e4, th = deg2rad(35.0), ga = 0.0, gT = deg2rad(gT_deg);
    const double v = 400.0, vT = 200.0;
    auto f = [&](double t, const double* x, double* dx) {
        dx[0] = vT * std::cos(x[3] - x[1]) - v * std::cos(x[2] - x[1]);
        dx[1] = (vT * std::sin(x[3] - x[1]) - v * std::sin(x[2] - x[1])) / x[0];
        dx[2] = 0.0;
        dx[3] = aT(t) / vT;
    };
    ObserverTrace out;
    TargetModel tgt;
    tgt.kind = TargetKind::constant_speed;
    tgt.v = vT;
    tgt.gamma = gT;
    ObserverState s = observer_init(relative_rates({r, th, ga, v}, tgt).v_theta);
    const auto steps = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        tgt.gamma = gT;
        const InterceptorKinematics ik{r, th, ga, v};
        const RelativeRates rr = relative_rates(ik, tgt);
        const ObserverStep os = observer_step(s, gains, rr.theta_dot, r, rr.r_dot, ga - th, 0.0, gT - th, dt);
        s = os.state;
        out.t.push_back(t + dt);
        out.est.push_back(os.aT_hat);
        out.err.push_back(std::abs(os.aT_hat - aT(t + dt)));

        double x[4] = {r, th, ga, gT}, k1[4], k2[4], k3[4], k4[4], y[4];
        f(t, x, k1);
        for (int i = 0; i < 4; ++i) y[i] = x[i] + dt / 2 * k1[i];
        f(t + dt / 2, y, k2);
        for (int i = 0; i < 4; ++i) y[i] = x[i] + dt / 2 * k2[i];
        f(t + dt / 2, y, k3);
        for (int i = 0; i < 4; ++i) y[i] = x[i] + dt * k3[i];
        f(t + dt, y, k4);
        for (int i = 0; i < 4; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        r = x[0];
        th = x[1];
        ga = x[2];
        gT = x[3];
    }
    return out;
}

double max_after(const ObserverTrace& tr, double t0) {
    double m = 0.0;
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        if (tr.t[k] > t0) m = std::max(m, tr.err[k]);
    return m;
}

}  // namespace

TEST_CASE("deviated-pursuit time-to-go at the maneuvering-table start") {
    const double th[] = {35, 25, 20, 30, 10}, ga[] = {0, 10, 30, 10, 15};
    const double want[] = {53.77, 37.50, 28.05, 41.53, 26.39};
    for (int i = 0; i < 5; ++i) {
        const double got =
            tgo_deviated(1e4, wrap_pi(deg2rad(ga[i] - th[i])), deg2rad(th[i]), deg2rad(120.0), 400.0, 200.0);
        CHECK(got == doctest::Approx(want[i]).epsilon(0.01 / want[i]));
    }
    CHECK_THROWS_AS(tgo_deviated(1e4, 0.0, 0.0, 0.0, 200.0, 200.0), Error);
}

TEST_CASE("stationary time-to-go") {
    const double th[] = {60, 150, 30, -60, 45}, ga[] = {30, 70, 90, -30, 45};
    const double want[] = {51.25, 54.84, 53.75, 51.25, 50.00};
    for (int i = 0; i < 5; ++i)
        CHECK(tgo_stationary(1e4, wrap_pi(deg2rad(ga[i] - th[i])), 200.0, 3.0) ==
              doctest::Approx(want[i]).epsilon(0.01 / want[i]));
    CHECK(tgo_stationary(1e4, 0.0, 200.0, 3.0) == doctest::Approx(50.0));
    try {
        tgo_stationary(1e4, 0.1, 200.0, 2.5);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_gain);
    }
}

TEST_CASE("disagreement sums neighbour differences and cancels over the graph") {
    const std::vector<double> tg{1, 2, 3, 4, 5};
    const Topology c5 = Topology::cycle(5);
    CHECK(disagreement(tg, c5, 1) == doctest::Approx(5.0));
    CHECK(disagreement(tg, c5, 3) == doctest::Approx(0.0));
    CHECK(disagreement(tg, c5, 5) == doctest::Approx(-5.0));
    double sum = 0.0;
    for (int i = 1; i <= 5; ++i) sum += disagreement(tg, c5, i);
    CHECK(sum == doctest::Approx(0.0));
}

TEST_CASE("observer gain ordering is enforced") {
    ObserverGains g;
    CHECK_NOTHROW(g.validate());
    g.G0 = 0.1;
    CHECK_THROWS_AS(g.validate(), Error);
    g = {};
    g.H2 = 1.0;
    CHECK_THROWS_AS(g.validate(), Error);
    g = {};
    g.F = 0.0;
    CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("observer stays at rest on a non-maneuvering target up to the Euler residual") {
    const auto coarse = observe([](double) { return 0.0; }, 10.0, 120.0, 1e-3);
    const auto fine = observe([](double) { return 0.0; }, 10.0, 120.0, 5e-4);
    CHECK(max_after(coarse, 0.0) < 5e-3);
    // First-order residual: halving the step roughly halves it.
    CHECK(max_after(fine, 0.0) < 0.6 * max_after(coarse, 0.0));
}

TEST_CASE("observer locks on to a constant maneuver") {
    const auto tr = observe([](double) { return 10.0; }, 20.0);
    CHECK(max_after(tr, 10.0) < 0.1);
}

TEST_CASE("observer tracks the sinusoidal maneuver") {
    // Nearly head-on, so the bearing stays well away from 90 degrees.
    const auto tr = observe([](double t) { return 10.0 * (1.0 + std::sin(pi * t / 10.0)); }, 20.0, 200.0);
    const double worst = max_after(tr, 5.0);
    MESSAGE("max |aT_hat - aT| for t > 5 s: " << worst);
    // Phase lag of the estimate behind a 0.05 Hz maneuver; the figure is
    // reproduced by the acceptance binary and recorded there.
    CHECK(worst < 1.5);
}

TEST_CASE("analytic error rate matches a finite difference along the kinematics") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const bool st = k % 2 == 0;
        InterceptorKinematics ik{500.0 + 9500.0 * U(rng), -pi + 2 * pi * U(rng), 0.0, 250.0 + 250.0 * U(rng)};
        ik.gamma = ik.theta + deg2rad(-70.0 + 140.0 * U(rng));
        TargetModel tgt;
        tgt.kind = st ? TargetKind::stationary : TargetKind::maneuvering;
        tgt.v = st ? 0.0 : 50.0 + 150.0 * U(rng);
        tgt.gamma = -pi + 2 * pi * U(rng);
        const double a = -100.0 + 200.0 * U(rng), aT = st ? 0.0 : -30.0 + 60.0 * U(rng);
        const TgoLaw law = st ? TgoLaw::stationary : TgoLaw::deviated_pursuit;

        const RelativeRates rr = relative_rates(ik, tgt);
        auto tgo_at = [&](double h) {
            InterceptorKinematics q = ik;
            q.r += h * rr.r_dot;
            q.theta += h * rr.theta_dot;
            q.gamma += h * a / ik.v;
            const double gT = tgt.gamma + (tgt.v > 0.0 ? h * aT / tgt.v : 0.0);
            return st ? tgo_stationary(q.r, q.delta(), q.v, 3.0) : tgo_deviated(q.r, q.delta(), q.theta, gT, q.v, tgt.v);
        };
        const double h = 1e-5;
        const double fd = 1.0 + (tgo_at(h) - tgo_at(-h)) / (2 * h);
        const double an = xi_rate_diagnostic(ik, tgt, a, aT, law, 3.0);
        CHECK(std::abs(an - fd) <= 1e-3 * std::max(1.0, std::abs(fd)));
    }
}
