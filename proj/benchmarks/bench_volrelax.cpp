#include <benchmark/benchmark.h>

#include "volrelax/volrelax.hpp"

using namespace volrelax;

namespace {

const VolatilitySeries& planted_vol() {
    static const VolatilitySeries vol = [] {
        PlantedRelaxationSpec spec;
        return absolute_volatility(gen_planted_relaxation(spec).returns);
    }();
    return vol;
}

void BM_GenPlanted(benchmark::State& state) {
    PlantedRelaxationSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gen_planted_relaxation(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenPlanted)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_SelectEvents(benchmark::State& state) {
    const auto& vol = planted_vol();
    const auto stats = mean_volatility(vol);
    for (auto _ : state) benchmark::DoNotOptimize(select_events(vol, static_cast<double>(state.range(0)), stats));
}
BENCHMARK(BM_SelectEvents)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RemanentProfile(benchmark::State& state) {
    const auto& vol = planted_vol();
    const auto events = select_events(vol, static_cast<double>(state.range(0)), mean_volatility(vol));
    for (auto _ : state) benchmark::DoNotOptimize(remanent_profile(vol, events, 1000));
    state.counters["events"] = static_cast<double>(events.size());
}
BENCHMARK(BM_RemanentProfile)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_OmoriCounts(benchmark::State& state) {
    const auto& vol = planted_vol();
    const auto stats = mean_volatility(vol);
    const auto mains = select_events(vol, 12.0, stats);
    for (auto _ : state) benchmark::DoNotOptimize(omori_counts(vol, mains, 3.0, stats, 1000));
}
BENCHMARK(BM_OmoriCounts)->Unit(benchmark::kMillisecond);

void BM_FitCumulative(benchmark::State& state) {
    const auto& vol = planted_vol();
    const auto cum = cumulative(remanent_profile(vol, select_events(vol, 10.0, mean_volatility(vol)), 1000));
    FitConfig cfg;
    cfg.tau_mode = state.range(0) ? TauMode::free : TauMode::fixed_zero;
    for (auto _ : state) benchmark::DoNotOptimize(fit_cumulative(cum.V_plus, cfg));
}
BENCHMARK(BM_FitCumulative)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Bootstrap(benchmark::State& state) {
    const auto& vol = planted_vol();
    const auto events = select_events(vol, 10.0, mean_volatility(vol));
    BootstrapConfig cfg;
    cfg.max_lag = 1000;
    cfg.replicas = 50;
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_errors(vol, events, cfg));
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
