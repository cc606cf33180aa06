#include <benchmark/benchmark.h>

#include "dmsim/trace.hpp"

namespace {

// Synthetic stream generation rate, the setup cost of every run.
void BM_GenerateSynthetic(benchmark::State& state) {
    dmsim::trace::WorkloadPreset preset;
    preset.label = "bench";
    preset.footprint_bytes = 8ull * 1024 * 1024;
    preset.total_accesses = static_cast<uint64_t>(state.range(0));
    preset.mean_gap_cycles = 200;

    dmsim::trace::SynthParams params;
    for (auto _ : state) {
        auto recs = dmsim::trace::generate_synthetic(preset, params, 0, 7);
        benchmark::DoNotOptimize(recs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_GenerateSynthetic)->Arg(1 << 16)->Arg(1 << 19);

} // namespace
