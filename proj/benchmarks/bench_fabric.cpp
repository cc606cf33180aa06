#include <benchmark/benchmark.h>

#include "dmsim/event.hpp"
#include "dmsim/fabric.hpp"

namespace {

// All-to-one hot spot: every source port fires a burst at port 0, so the
// price of VOQ reservation, arbitration, and ingress back-pressure is paid
// on every packet.
void BM_FabricHotSpot(benchmark::State& state) {
    const uint32_t ports = static_cast<uint32_t>(state.range(0));
    const int packets_per_src = 64;
    for (auto _ : state) {
        dmsim::EventQueue eq;
        dmsim::fabric::Fabric fab(eq, ports, {});
        fab.set_delivery_handler([&](const dmsim::fabric::Packet& pkt) {
            fab.consume_ingress(pkt.dst_port, pkt.size_bytes);
        });
        for (uint32_t src = 1; src < ports; ++src)
            for (int i = 0; i < packets_per_src; ++i)
                fab.send({src, 0, 64, dmsim::fabric::PacketKind::Request, 0, 0});
        eq.run();
        benchmark::DoNotOptimize(fab.delivered_count());
    }
    state.SetItemsProcessed(state.iterations() * (ports - 1) * packets_per_src);
}

BENCHMARK(BM_FabricHotSpot)->Arg(8)->Arg(64);

} // namespace
