#include <benchmark/benchmark.h>

#include "dmsim/gmm.hpp"

namespace {

using dmsim::gmm::Manager;
using dmsim::gmm::PoolPolicy;

// Grant path cost per policy, with interleaved access recording so the
// smart-idle rings carry real traffic.
void BM_GmmAllocate(benchmark::State& state) {
    const auto policy = static_cast<PoolPolicy>(state.range(0));
    const uint32_t pools = 16;
    const uint64_t chunk = 64 * 1024;
    const int grants = 1024;
    for (auto _ : state) {
        Manager mgr(pools, uint64_t(grants) * chunk, chunk, policy, 42);
        for (int g = 0; g < grants; ++g) {
            auto grant = mgr.allocate_chunk(0, g * 1000);
            benchmark::DoNotOptimize(grant);
            for (int a = 0; a < 32; ++a)
                mgr.record_pool_access(static_cast<dmsim::PoolId>((g + a) % pools));
        }
    }
    state.SetItemsProcessed(state.iterations() * grants);
}

BENCHMARK(BM_GmmAllocate)
    ->Arg(static_cast<int>(PoolPolicy::Random))
    ->Arg(static_cast<int>(PoolPolicy::RoundRobin))
    ->Arg(static_cast<int>(PoolPolicy::SmartIdle));

} // namespace
