#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "salvo/guidance.hpp"
#include "salvo/network.hpp"
#include "salvo/simulator.hpp"
#include "salvo_cli/scenario_io.hpp"

using namespace salvo;

static void BM_Lambda2Cycle(benchmark::State& state) {
    const Topology g = Topology::cycle(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(algebraic_connectivity(g));
}
BENCHMARK(BM_Lambda2Cycle)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

static void BM_CommandFixedManeuvering(benchmark::State& state) {
    const InterceptorKinematics ik{8000.0, deg2rad(20.0), deg2rad(35.0), 400.0};
    TargetModel tgt;
    tgt.kind = TargetKind::maneuvering;
    tgt.v = 200.0;
    tgt.gamma = deg2rad(120.0);
    const RelativeRates rr = relative_rates(ik, tgt);
    GuidanceConfig cfg;
    double zeta = -0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmd_fixed_maneuvering(ik, rr, tgt, zeta, 12.0, cfg, 1.382, 5));
        zeta = -zeta;
    }
}
BENCHMARK(BM_CommandFixedManeuvering);

static void BM_PredefinedConsensusTerm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Topology g = Topology::complete(n);
    std::vector<double> tgos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tgos[static_cast<std::size_t>(i)] = 30.0 + 0.7 * i;
    for (auto _ : state)
        for (int i = 0; i < n; ++i)
            benchmark::DoNotOptimize(
                predefined_consensus_term(tgos, g, i, 2.0, 1.0, 1.0, 0.5, 2.0, 1.0, 0.1, 1e-3));
}
BENCHMARK(BM_PredefinedConsensusTerm)->Arg(5)->Arg(20);

// One simulated second of a bundled engagement.
static void BM_RunOneSecond(benchmark::State& state, const char* preset) {
    Scenario sc = cli::load_scenario(preset).scenario;
    sc.t_max = 1.0;
    for (auto _ : state) {
        SimLog log = run(sc);
        benchmark::DoNotOptimize(log.t.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::lround(sc.t_max / sc.dt)));
}
BENCHMARK_CAPTURE(BM_RunOneSecond, stationary, "table1_stationary")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunOneSecond, maneuvering, "table1_maneuvering")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunOneSecond, switching, "table2_maneuvering_switching")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunOneSecond, airframe, "airframe")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
