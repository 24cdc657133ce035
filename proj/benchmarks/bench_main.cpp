#include <benchmark/benchmark.h>

#include "vbatt/controller.hpp"
#include "vbatt/harness.hpp"
#include "vbatt/oracle.hpp"
#include "vbatt/scenario.hpp"

using namespace vbatt;

namespace {

ScenarioConfig bench_config(std::size_t horizon) {
    ScenarioConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = 42;
    return cfg;
}

void BM_dispatch(benchmark::State& state) {
    const ScenarioConfig cfg = bench_config(1);
    const auto env = declared_envelope(cfg);
    const auto st = init_state(2500.0, 300.0, env);
    const SlotObservation obs{1.1, 1800.0, 15000.0, {180, 160, 1500, 3500, 1.0}};
    for (auto _ : state) {
        auto action = dispatch(st, obs);
        benchmark::DoNotOptimize(action);
    }
}
BENCHMARK(BM_dispatch);

void BM_generate_month(benchmark::State& state) {
    const ScenarioConfig cfg = bench_config(720);
    for (auto _ : state) {
        auto trace = generate(cfg);
        benchmark::DoNotOptimize(trace);
    }
}
BENCHMARK(BM_generate_month);

void BM_run_month(benchmark::State& state) {
    const ScenarioConfig cfg = bench_config(720);
    const auto trace = generate(cfg);
    const auto env = declared_envelope(cfg);
    for (auto _ : state) {
        auto report = run(trace, 300.0, 2500.0, false, env);
        benchmark::DoNotOptimize(report);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 720);
}
BENCHMARK(BM_run_month);

void BM_offline_dp(benchmark::State& state) {
    const auto horizon = static_cast<std::size_t>(state.range(0));
    const ScenarioConfig cfg = bench_config(horizon);
    const auto trace = generate(cfg);
    for (auto _ : state) {
        auto solution = offline_optimal(trace, 2500.0, 1.0);
        benchmark::DoNotOptimize(solution);
    }
}
BENCHMARK(BM_offline_dp)->Arg(24)->Arg(48);

}  // namespace

BENCHMARK_MAIN();
