#include "dmsim/engine.hpp"

#include "dmsim/error.hpp"

namespace dmsim::engine {

Engine::Engine(const config::RunConfig& cfg, std::vector<uint32_t> node_benchmark_ids,
               std::vector<std::string> benchmark_labels)
    : cfg_(cfg), node_bench_(std::move(node_benchmark_ids)) {
    DMSIM_CHECK(node_bench_.size() == cfg_.nodes, "engine: node/benchmark map size mismatch");

    gmm_ = std::make_unique<gmm::Manager>(cfg_.pools, cfg_.pool_capacity_bytes,
                                          cfg_.chunk_bytes, cfg_.pool_policy, cfg_.seed);
    for (uint32_t n = 0; n < cfg_.nodes; ++n) {
        maps_.push_back(std::make_unique<addrmap::NodeAddressMap>(n, cfg_.local_bytes,
                                                                  cfg_.page_policy));
        local_mem_.push_back(std::make_unique<dram::MemoryDevice>(
            cfg_.dram.local_channels, cfg_.dram.banks_per_channel,
            cfg_.dram.queue_capacity, cfg_.dram.t_access_ps));
    }
    for (uint32_t p = 0; p < cfg_.pools; ++p) {
        pool_mem_.push_back(std::make_unique<dram::MemoryDevice>(
            cfg_.dram.pool_channels, cfg_.dram.banks_per_channel,
            cfg_.dram.queue_capacity, cfg_.dram.t_access_ps));
    }
    fabric_ = std::make_unique<fabric::Fabric>(eq_, cfg_.nodes + cfg_.pools, cfg_.fabric);
    fabric_->set_delivery_handler([this](const fabric::Packet& pkt) { on_delivery(pkt); });
    report_ = std::make_unique<metrics::Report>(std::move(benchmark_labels), cfg_.pools,
                                                cfg_.cycle_ps *
                                                    static_cast<SimTime>(cfg_.epoch_cycles));

    local_pending_.resize(cfg_.nodes);
    pool_pending_.resize(cfg_.pools);

    // Wire drain hooks: a finishing channel re-opens its owner's front queue.
    for (uint32_t n = 0; n < cfg_.nodes; ++n) {
        for (uint32_t c = 0; c < local_mem_[n]->num_channels(); ++c) {
            local_mem_[n]->channel(c).set_drain_hook([this, n]() { drain_local(n); });
        }
    }
    for (uint32_t p = 0; p < cfg_.pools; ++p) {
        for (uint32_t c = 0; c < pool_mem_[p]->num_channels(); ++c) {
            pool_mem_[p]->channel(c).set_drain_hook([this, p]() { drain_pool(p); });
        }
    }
}

uint64_t Engine::alloc_token() {
    if (!free_slots_.empty()) {
        uint64_t t = free_slots_.back();
        free_slots_.pop_back();
        return t;
    }
    slots_.emplace_back();
    return slots_.size() - 1;
}

void Engine::free_token(uint64_t token) {
    slots_[token] = RequestCtx{};
    free_slots_.push_back(token);
}

void Engine::run(const std::vector<LlcMissRecord>& trace) {
    if (!trace.empty()) {
        SimTime t0 = static_cast<SimTime>(trace[0].timestamp) * cfg_.cycle_ps;
        eq_.schedule(t0, [this, &trace]() { inject(trace, 0); });
    }
    eq_.run();
    end_time_ = eq_.now();
    report_->finalize(end_time_);
    DMSIM_CHECK(injected_ == completed_ + oom_drops_,
                "engine: access conservation violated");
    DMSIM_CHECK(fabric_->sent_count() == fabric_->delivered_count(),
                "engine: packets in flight after drain");
}

// One chained event per record keeps the queue small at any instant.
void Engine::inject(const std::vector<LlcMissRecord>& trace, size_t idx) {
    const LlcMissRecord& rec = trace[idx];
    injected_ += 1;
    start_access(rec);
    if (idx + 1 < trace.size()) {
        SimTime t_next = static_cast<SimTime>(trace[idx + 1].timestamp) * cfg_.cycle_ps;
        DMSIM_CHECK(t_next >= eq_.now(), "engine: trace timestamps not sorted");
        eq_.schedule(t_next, [this, &trace, idx]() { inject(trace, idx + 1); });
    }
}

void Engine::start_access(const LlcMissRecord& rec) {
    DMSIM_CHECK(rec.node_id < cfg_.nodes, "engine: trace references unknown node");
    NodeId node = rec.node_id;
    auto loc = maps_[node]->resolve(rec.vaddr, *gmm_, eq_.now());
    if (!loc) {
        oom_drops_ += 1;
        return;
    }
    if (loc->is_local) {
        uint64_t addr =
            static_cast<uint64_t>(loc->local_frame) * kPageBytes + page_offset_of(rec.vaddr);
        local_pending_[node].push_back(
            LocalPending{node, node_bench_[node], addr, eq_.now()});
        drain_local(node);
    } else {
        uint64_t token = alloc_token();
        RequestCtx& ctx = slots_[token];
        ctx.node = node;
        ctx.benchmark = node_bench_[node];
        ctx.pool = loc->pool_id;
        ctx.pool_addr = loc->pool_byte_offset + page_offset_of(rec.vaddr);
        ctx.t_send = eq_.now();
        fabric::Packet pkt;
        pkt.src_port = node;
        pkt.dst_port = cfg_.nodes + loc->pool_id;
        pkt.size_bytes = cfg_.fabric.request_bytes;
        pkt.kind = fabric::PacketKind::Request;
        pkt.token = token;
        fabric_->send(pkt);
    }
}

void Engine::drain_local(NodeId node) {
    auto& q = local_pending_[node];
    while (!q.empty()) {
        const LocalPending& head = q.front();
        dram::DramChannel& ch = local_mem_[node]->channel_for(head.addr);
        if (!ch.can_accept()) return; // this channel's drain hook resumes us
        LocalPending item = head;
        q.pop_front();
        ch.submit(eq_, dram::bank_of(item.addr, cfg_.dram.banks_per_channel),
                  [this, item](SimTime, SimTime done) {
                      metrics::CompletionRecord rec;
                      rec.node_id = item.node;
                      rec.benchmark_id = item.benchmark;
                      rec.remote = false;
                      rec.total_ps = done - item.t_inject;
                      rec.local_ps = rec.total_ps;
                      rec.completion_time = done;
                      emit(rec);
                  });
    }
}

void Engine::on_delivery(const fabric::Packet& pkt) {
    if (pkt.dst_port >= cfg_.nodes) {
        // Request reached its pool. Ingress bytes stay reserved until the
        // request is accepted by a channel queue (back-pressure to the switch).
        PoolId pool = pkt.dst_port - cfg_.nodes;
        slots_[pkt.token].t_deliver_req = eq_.now();
        report_->record_pool_request(pool, eq_.now());
        gmm_->record_pool_access(pool);
        pool_pending_[pool].push_back(pkt.token);
        drain_pool(pool);
    } else {
        // Response back at the node; consumed immediately.
        fabric_->consume_ingress(pkt.dst_port, pkt.size_bytes);
        finish_remote(pkt.token, eq_.now());
    }
}

void Engine::drain_pool(PoolId pool) {
    auto& q = pool_pending_[pool];
    while (!q.empty()) {
        uint64_t token = q.front();
        RequestCtx& ctx = slots_[token];
        dram::DramChannel& ch = pool_mem_[pool]->channel_for(ctx.pool_addr);
        if (!ch.can_accept()) return;
        q.pop_front();
        fabric_->consume_ingress(cfg_.nodes + pool, cfg_.fabric.request_bytes);
        ch.submit(eq_, dram::bank_of(ctx.pool_addr, cfg_.dram.banks_per_channel),
                  [this, token, pool](SimTime started, SimTime done) {
                      RequestCtx& c = slots_[token];
                      c.t_dram_start = started;
                      c.t_dram_done = done;
                      fabric::Packet resp;
                      resp.src_port = cfg_.nodes + pool;
                      resp.dst_port = c.node;
                      resp.size_bytes = cfg_.fabric.response_bytes;
                      resp.kind = fabric::PacketKind::Response;
                      resp.token = token;
                      fabric_->send(resp);
                  });
    }
}

void Engine::finish_remote(uint64_t token, SimTime t_deliver_resp) {
    RequestCtx& ctx = slots_[token];
    metrics::CompletionRecord rec;
    rec.node_id = ctx.node;
    rec.benchmark_id = ctx.benchmark;
    rec.remote = true;
    rec.total_ps = t_deliver_resp - ctx.t_send;
    rec.network_ps =
        (ctx.t_deliver_req - ctx.t_send) + (t_deliver_resp - ctx.t_dram_done);
    rec.remote_queue_ps = ctx.t_dram_start - ctx.t_deliver_req;
    rec.remote_service_ps = ctx.t_dram_done - ctx.t_dram_start;
    rec.completion_time = t_deliver_resp;
    emit(rec);
    free_token(token);
}

void Engine::emit(const metrics::CompletionRecord& rec) {
    completed_ += 1;
    report_->record_completion(rec);
    if (sink_) sink_(rec);
}

} // namespace dmsim::engine
