#include <benchmark/benchmark.h>

#include "dmsim/dram.hpp"
#include "dmsim/event.hpp"

namespace {

// Closed-loop channel throughput: every completion feeds the next request,
// cycling across banks so service overlaps.
void BM_DramChannel(benchmark::State& state) {
    const uint64_t total = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) {
        dmsim::EventQueue eq;
        dmsim::dram::DramChannel ch(8, 64, dmsim::dram::kDefaultAccessPs);
        uint64_t submitted = 0;
        std::function<void()> pump = [&] {
            while (submitted < total && ch.can_accept()) {
                uint32_t bank = static_cast<uint32_t>(submitted % ch.num_banks());
                ++submitted;
                ch.submit(eq, bank, {});
            }
        };
        ch.set_drain_hook(pump);
        pump();
        eq.run();
        benchmark::DoNotOptimize(ch.served_count());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(total));
}

BENCHMARK(BM_DramChannel)->Arg(1 << 12)->Arg(1 << 15);

} // namespace
