#ifndef DMSIM_FABRIC_HPP
#define DMSIM_FABRIC_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "dmsim/event.hpp"
#include "dmsim/types.hpp"

namespace dmsim::fabric {

struct FabricParams {
    SimTime prep_ps = 25'000;   // request/response packaging at the endpoint
    SimTime nic_ps = 10'000;    // NIC traversal, charged on egress and ingress
    SimTime prop_ps = 2'500;    // per-hop wire propagation
    SimTime switch_ps = 20'000; // switch pipeline latency
    uint64_t link_rate_bps = 100'000'000'000ull;
    uint32_t request_bytes = 64;
    uint32_t response_bytes = 128;
    uint64_t voq_capacity_bytes = 16384;   // per (input, output) pair
    uint64_t ingress_capacity_bytes = 4096; // per destination port
};

// Wire time for a packet, rounded up to a whole picosecond.
SimTime transmission_delay_ps(uint64_t bytes, uint64_t rate_bps);

enum class PacketKind : uint8_t { Request, Response };

struct Packet {
    uint32_t src_port = 0;
    uint32_t dst_port = 0;
    uint32_t size_bytes = 0;
    PacketKind kind = PacketKind::Request;
    uint64_t token = 0;    // opaque to the fabric, returned at delivery
    uint64_t trace_id = 0; // assigned by send() when stage tracing is on
};

// One packet's stage timeline, for debugging; rows appear in delivery order.
struct StageTraceRow {
    uint64_t pkt_id = 0;
    PacketKind kind = PacketKind::Request;
    SimTime injected = 0;
    SimTime nic_out = 0;    // source link transmission done
    SimTime switch_in = 0;  // arrival at the switch input
    SimTime switch_out = 0; // egress transmission done
    SimTime delivered = 0;
};

// Star topology: every endpoint has one full-duplex link to one switch.
// Store-and-forward with two serialization points (host link, switch egress
// link). Congestion never drops a packet; it stalls the stage behind it:
//   - a source link only starts transmitting when the target VOQ can reserve
//     the packet's bytes (released when the packet leaves the switch),
//   - a switch output only forwards a packet when the destination ingress
//     budget can take it (released when the destination consumes it).
// Outputs arbitrate over inputs round-robin, one packet per grant.
class Fabric {
public:
    using DeliveryFn = std::function<void(const Packet&)>;

    Fabric(EventQueue& eq, uint32_t num_ports, const FabricParams& params);

    void set_delivery_handler(DeliveryFn fn) { deliver_ = std::move(fn); }

    // Hands the packet to the source endpoint's send pipeline at the current
    // time; it reaches the source NIC queue after prep + nic.
    void send(Packet pkt);

    // The destination is done with a delivered packet; frees ingress budget.
    void consume_ingress(uint32_t port, uint32_t size_bytes);

    uint64_t sent_count() const { return sent_; }
    uint64_t delivered_count() const { return delivered_; }
    uint32_t num_ports() const { return n_; }
    const FabricParams& params() const { return p_; }

    // Stage tracing is off by default; it records one row per packet.
    void enable_stage_trace() { stage_trace_on_ = true; }
    const std::vector<StageTraceRow>& stage_trace() const { return stage_done_; }

    // Zero-load one-way latency for a packet of the given size (no queueing
    // anywhere): prep + 2*nic + 2*tx + 2*prop + switch.
    SimTime unloaded_one_way_ps(uint32_t bytes) const;

private:
    struct SrcPort {
        std::deque<Packet> q;
        SimTime link_busy_until = 0;
    };
    struct Voq {
        std::deque<Packet> q;        // packets past the switch pipeline
        uint64_t reserved_bytes = 0; // includes packets still in flight to the switch
    };
    struct OutPort {
        SimTime link_busy_until = 0;
        uint32_t rr_last = 0; // input served last; scan resumes after it
        uint64_t ingress_reserved = 0;
    };

    Voq& voq(uint32_t in, uint32_t out) { return voq_[size_t(in) * n_ + out]; }
    void try_send_src(uint32_t port);
    void try_forward(uint32_t out);
    StageTraceRow* stage_row(const Packet& pkt);

    EventQueue& eq_;
    uint32_t n_;
    FabricParams p_;
    std::vector<SrcPort> src_;
    std::vector<Voq> voq_;
    std::vector<OutPort> out_;
    DeliveryFn deliver_;
    uint64_t sent_ = 0;
    uint64_t delivered_ = 0;

    bool stage_trace_on_ = false;
    std::vector<StageTraceRow> stage_open_; // indexed by trace_id - 1
    std::vector<StageTraceRow> stage_done_;
};

} // namespace dmsim::fabric

#endif
