#include <benchmark/benchmark.h>

#include "dmsim/event.hpp"

namespace {

// Bulk schedule then drain: the heap-bound upper limit on event throughput.
void BM_EventQueueBulk(benchmark::State& state) {
    const int64_t n = state.range(0);
    for (auto _ : state) {
        dmsim::EventQueue eq;
        int64_t fired = 0;
        for (int64_t i = 0; i < n; ++i) {
            // Scattered times exercise heap reordering.
            dmsim::SimTime t = (i * 2654435761u) % 1'000'000;
            eq.schedule(t, [&fired] { ++fired; });
        }
        eq.run();
        benchmark::DoNotOptimize(fired);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

// Chained self-scheduling: the engine's open-loop injection pattern, heap
// stays near size 1.
void BM_EventQueueChained(benchmark::State& state) {
    const int64_t n = state.range(0);
    for (auto _ : state) {
        dmsim::EventQueue eq;
        int64_t fired = 0;
        std::function<void()> step = [&] {
            if (++fired < n) eq.schedule(eq.now() + 833, step);
        };
        eq.schedule(0, step);
        eq.run();
        benchmark::DoNotOptimize(fired);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

BENCHMARK(BM_EventQueueBulk)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_EventQueueChained)->Arg(1 << 14)->Arg(1 << 17);

} // namespace
