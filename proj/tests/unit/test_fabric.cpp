#include <doctest.h>

#include <vector>

#include "dmsim/event.hpp"
#include "dmsim/fabric.hpp"

using namespace dmsim;
using namespace dmsim::fabric;

namespace {

struct Delivery {
    Packet pkt;
    SimTime at;
};

struct Harness {
    EventQueue eq;
    Fabric fab;
    std::vector<Delivery> deliveries;
    bool auto_consume = true;

    explicit Harness(uint32_t ports, FabricParams p = {}) : fab(eq, ports, p) {
        fab.set_delivery_handler([this](const Packet& pkt) {
            deliveries.push_back({pkt, eq.now()});
            if (auto_consume) fab.consume_ingress(pkt.dst_port, pkt.size_bytes);
        });
    }

    Packet req(uint32_t src, uint32_t dst, uint64_t token = 0) {
        Packet p;
        p.src_port = src;
        p.dst_port = dst;
        p.size_bytes = fab.params().request_bytes;
        p.kind = PacketKind::Request;
        p.token = token;
        return p;
    }
};

} // namespace

TEST_SUITE("fabric") {

TEST_CASE("transmission delay rounds up to whole picoseconds") {
    CHECK(transmission_delay_ps(64, 100'000'000'000ull) == 5'120);
    CHECK(transmission_delay_ps(128, 100'000'000'000ull) == 10'240);
    // 64B at 3 bps: 512e12/3 ps is not integral, must round up.
    CHECK(transmission_delay_ps(64, 3) == (512'000'000'000'000ull + 2) / 3);
    CHECK(transmission_delay_ps(1, 8'000'000'000'000ull) == 1);
}

TEST_CASE("zero-load one-way latency is the sum of the stage delays") {
    Harness h(2);
    // prep 25 + nic 10 + tx 5.12 + prop 2.5 + switch 20 + tx 5.12 + prop 2.5
    // + nic 10 = 80.24ns for a 64B request.
    CHECK(h.fab.unloaded_one_way_ps(64) == 80'240);
    CHECK(h.fab.unloaded_one_way_ps(128) == 90'480);

    h.fab.send(h.req(0, 1));
    h.eq.run();
    REQUIRE(h.deliveries.size() == 1);
    CHECK(h.deliveries[0].at == 80'240);
    CHECK(h.fab.sent_count() == 1);
    CHECK(h.fab.delivered_count() == 1);
}

TEST_CASE("the source link serializes back-to-back packets") {
    Harness h(2);
    h.fab.send(h.req(0, 1, 1));
    h.fab.send(h.req(0, 1, 2));
    h.eq.run();
    REQUIRE(h.deliveries.size() == 2);
    CHECK(h.deliveries[0].at == 80'240);
    // The second packet waits one transmission slot (5.12ns) at the source.
    CHECK(h.deliveries[1].at == 80'240 + 5'120);
    CHECK(h.deliveries[0].pkt.token == 1);
    CHECK(h.deliveries[1].pkt.token == 2);
}

TEST_CASE("the egress link serializes packets from different sources") {
    Harness h(3);
    h.fab.send(h.req(0, 2, 1));
    h.fab.send(h.req(1, 2, 2));
    h.eq.run();
    REQUIRE(h.deliveries.size() == 2);
    // Input links run in parallel; the shared egress adds one tx slot.
    CHECK(h.deliveries[0].at == 80'240);
    CHECK(h.deliveries[1].at == 80'240 + 5'120);
}

TEST_CASE("output arbitration is round-robin across inputs") {
    Harness h(4);
    // Saturate: three inputs, two packets each, all to port 3.
    for (uint32_t src = 0; src < 3; ++src) {
        h.fab.send(h.req(src, 3, src * 10 + 1));
        h.fab.send(h.req(src, 3, src * 10 + 2));
    }
    h.eq.run();
    REQUIRE(h.deliveries.size() == 6);
    std::vector<uint32_t> srcs;
    for (const auto& d : h.deliveries) srcs.push_back(d.pkt.src_port);
    CHECK(srcs == std::vector<uint32_t>{0, 1, 2, 0, 1, 2});
}

TEST_CASE("a full VOQ stalls the source link, not the simulation") {
    FabricParams p;
    p.voq_capacity_bytes = 64; // exactly one request
    p.response_bytes = 64;     // keep the capacity invariant satisfied
    Harness h(2, p);
    for (int i = 0; i < 4; ++i) h.fab.send(h.req(0, 1, i + 1));
    h.eq.run();
    CHECK(h.deliveries.size() == 4);
    CHECK(h.fab.sent_count() == h.fab.delivered_count());
    // Still strictly ordered.
    for (size_t i = 1; i < h.deliveries.size(); ++i) {
        CHECK(h.deliveries[i].at > h.deliveries[i - 1].at);
        CHECK(h.deliveries[i].pkt.token == i + 1);
    }
}

TEST_CASE("ingress budget holds packets in the switch until consumed") {
    FabricParams p;
    p.ingress_capacity_bytes = 64; // one request at a time
    p.response_bytes = 64;         // keep the capacity invariant satisfied
    Harness h(2, p);
    h.auto_consume = false;
    h.fab.send(h.req(0, 1, 1));
    h.fab.send(h.req(0, 1, 2));
    h.eq.run();
    // Only the first packet could be forwarded.
    REQUIRE(h.deliveries.size() == 1);
    CHECK(h.deliveries[0].pkt.token == 1);

    // Consuming it releases the budget and wakes the output port.
    h.fab.consume_ingress(1, 64);
    h.eq.run();
    REQUIRE(h.deliveries.size() == 2);
    CHECK(h.deliveries[1].pkt.token == 2);
    CHECK(h.fab.sent_count() == 2);
    CHECK(h.fab.delivered_count() == 2);
}

TEST_CASE("an input blocked on ingress budget does not block other inputs") {
    FabricParams p;
    p.ingress_capacity_bytes = 64;
    p.response_bytes = 64;
    Harness h(3, p);
    h.auto_consume = false;
    h.fab.send(h.req(0, 2, 1));
    h.fab.send(h.req(1, 2, 2));
    h.eq.run();
    REQUIRE(h.deliveries.size() == 1);
    // Port 0 won the first grant; port 1 waits for budget, not for port 0.
    h.fab.consume_ingress(2, 64);
    h.eq.run();
    REQUIRE(h.deliveries.size() == 2);
    CHECK(h.deliveries[1].pkt.token == 2);
}

TEST_CASE("stage trace records the packet timeline") {
    Harness h(2);
    h.fab.enable_stage_trace();
    h.fab.send(h.req(0, 1, 7));
    h.eq.run();
    REQUIRE(h.fab.stage_trace().size() == 1);
    const StageTraceRow& row = h.fab.stage_trace()[0];
    CHECK(row.pkt_id == 1);
    CHECK(row.kind == PacketKind::Request);
    CHECK(row.injected == 0);
    CHECK(row.nic_out == 25'000 + 10'000 + 5'120);        // prep + nic + tx
    CHECK(row.switch_in == row.nic_out + 2'500);          // + prop
    CHECK(row.switch_out == row.switch_in + 20'000 + 5'120); // + pipeline + egress tx
    CHECK(row.delivered == 80'240);
}

TEST_CASE("responses use their own size on the wire") {
    Harness h(2);
    Packet resp;
    resp.src_port = 1;
    resp.dst_port = 0;
    resp.size_bytes = 128;
    resp.kind = PacketKind::Response;
    h.fab.send(resp);
    h.eq.run();
    REQUIRE(h.deliveries.size() == 1);
    CHECK(h.deliveries[0].at == 90'480);
}

} // TEST_SUITE
