#include "dmsim/fabric.hpp"

#include "dmsim/error.hpp"

namespace dmsim::fabric {

SimTime transmission_delay_ps(uint64_t bytes, uint64_t rate_bps) {
    DMSIM_CHECK(rate_bps > 0, "fabric: link rate must be positive");
    // bytes * 8 bits * 1e12 ps/s, divided by bits/s, rounded up.
    uint64_t bits_ps = bytes * 8ull * 1'000'000'000'000ull;
    return static_cast<SimTime>(ceil_div(bits_ps, rate_bps));
}

Fabric::Fabric(EventQueue& eq, uint32_t num_ports, const FabricParams& params)
    : eq_(eq), n_(num_ports), p_(params) {
    DMSIM_CHECK(n_ >= 2, "fabric: need at least two ports");
    DMSIM_CHECK(p_.voq_capacity_bytes >= p_.response_bytes &&
                    p_.voq_capacity_bytes >= p_.request_bytes,
                "fabric: voq capacity below a single packet");
    DMSIM_CHECK(p_.ingress_capacity_bytes >= p_.response_bytes &&
                    p_.ingress_capacity_bytes >= p_.request_bytes,
                "fabric: ingress capacity below a single packet");
    src_.resize(n_);
    voq_.resize(size_t(n_) * n_);
    out_.resize(n_);
    for (uint32_t i = 0; i < n_; ++i) out_[i].rr_last = n_ - 1;
}

SimTime Fabric::unloaded_one_way_ps(uint32_t bytes) const {
    SimTime tx = transmission_delay_ps(bytes, p_.link_rate_bps);
    return p_.prep_ps + 2 * p_.nic_ps + 2 * tx + 2 * p_.prop_ps + p_.switch_ps;
}

StageTraceRow* Fabric::stage_row(const Packet& pkt) {
    if (!stage_trace_on_ || pkt.trace_id == 0) return nullptr;
    return &stage_open_[pkt.trace_id - 1];
}

void Fabric::send(Packet pkt) {
    DMSIM_CHECK(pkt.src_port < n_ && pkt.dst_port < n_, "fabric: port out of range");
    DMSIM_CHECK(pkt.src_port != pkt.dst_port, "fabric: packet to own port");
    DMSIM_CHECK(pkt.size_bytes > 0, "fabric: empty packet");
    sent_ += 1;
    if (stage_trace_on_) {
        StageTraceRow row;
        row.pkt_id = stage_open_.size() + 1;
        row.kind = pkt.kind;
        row.injected = eq_.now();
        stage_open_.push_back(row);
        pkt.trace_id = row.pkt_id;
    }
    uint32_t port = pkt.src_port;
    eq_.schedule(eq_.now() + p_.prep_ps + p_.nic_ps, [this, port, pkt]() {
        src_[port].q.push_back(pkt);
        try_send_src(port);
    });
}

void Fabric::try_send_src(uint32_t port) {
    SrcPort& s = src_[port];
    if (s.q.empty() || s.link_busy_until > eq_.now()) return;

    const Packet& head = s.q.front();
    Voq& v = voq(port, head.dst_port);
    if (v.reserved_bytes + head.size_bytes > p_.voq_capacity_bytes) {
        // Head blocked on switch buffer space; the VOQ release hook retries.
        return;
    }
    v.reserved_bytes += head.size_bytes;

    Packet pkt = head;
    s.q.pop_front();
    SimTime end = eq_.now() + transmission_delay_ps(pkt.size_bytes, p_.link_rate_bps);
    s.link_busy_until = end;

    if (StageTraceRow* row = stage_row(pkt)) {
        row->nic_out = end;
        row->switch_in = end + p_.prop_ps;
    }
    eq_.schedule(end, [this, port]() { try_send_src(port); });
    // The packet clears the switch pipeline prop + switch_ps after the wire.
    eq_.schedule(end + p_.prop_ps + p_.switch_ps, [this, pkt]() {
        voq(pkt.src_port, pkt.dst_port).q.push_back(pkt);
        try_forward(pkt.dst_port);
    });
}

void Fabric::try_forward(uint32_t out) {
    OutPort& o = out_[out];
    if (o.link_busy_until > eq_.now()) return;

    // Round-robin over inputs, starting after the last one served. An input
    // whose head does not fit the ingress budget is skipped, not waited on.
    for (uint32_t step = 1; step <= n_; ++step) {
        uint32_t in = (o.rr_last + step) % n_;
        Voq& v = voq(in, out);
        if (v.q.empty()) continue;
        const Packet& head = v.q.front();
        if (o.ingress_reserved + head.size_bytes > p_.ingress_capacity_bytes) continue;

        o.ingress_reserved += head.size_bytes;
        o.rr_last = in;
        Packet pkt = head;
        v.q.pop_front();

        SimTime end = eq_.now() + transmission_delay_ps(pkt.size_bytes, p_.link_rate_bps);
        o.link_busy_until = end;

        if (StageTraceRow* row = stage_row(pkt)) row->switch_out = end;
        eq_.schedule(end, [this, in, out, size = pkt.size_bytes]() {
            voq(in, out).reserved_bytes -= size;
            try_send_src(in); // a stalled source head may fit now
            try_forward(out);
        });
        eq_.schedule(end + p_.prop_ps + p_.nic_ps, [this, pkt]() {
            delivered_ += 1;
            if (StageTraceRow* row = stage_row(pkt)) {
                row->delivered = eq_.now();
                stage_done_.push_back(*row);
            }
            DMSIM_CHECK(deliver_ != nullptr, "fabric: no delivery handler installed");
            deliver_(pkt);
        });
        return;
    }
}

void Fabric::consume_ingress(uint32_t port, uint32_t size_bytes) {
    DMSIM_CHECK(port < n_, "fabric: port out of range");
    OutPort& o = out_[port];
    DMSIM_CHECK(o.ingress_reserved >= size_bytes, "fabric: ingress release underflow");
    o.ingress_reserved -= size_bytes;
    try_forward(port);
}

} // namespace dmsim::fabric
