// Serial reference vs OpenMP kernel for the specificity simulation.
#include <benchmark/benchmark.h>

#include <cstdlib>
#include <string>

#include "vtsynth/eval.hpp"

using namespace vtsynth;

namespace {

struct Fixture {
    Model model;
    DeterministicVts monitor;
};

const Fixture& email() {
    static const Fixture f = [] {
        const char* env = std::getenv("VTSYNTH_BENCH_MODEL");
        Model m = load_model(env ? env : FIXTURE_DIR "/email.json");
        DeterministicVts mon = config_monitor(m, m.observable_names());
        return Fixture{std::move(m), std::move(mon)};
    }();
    return f;
}

SimulationConfig config(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.runs = static_cast<std::uint64_t>(state.range(0));
    cfg.steps = 200;
    return cfg;
}

void BM_Serial(benchmark::State& state) {
    const auto& f = email();
    SimulationConfig cfg = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_specificity_serial(f.model, f.monitor, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.runs));
}

void BM_Parallel(benchmark::State& state) {
    const auto& f = email();
    SimulationConfig cfg = config(state);
    cfg.threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_specificity(f.model, f.monitor, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.runs));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Args({10000, 1})->Args({10000, 2})->Args({10000, 4})->Args({10000, 8})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
