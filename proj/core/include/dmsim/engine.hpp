#ifndef DMSIM_ENGINE_HPP
#define DMSIM_ENGINE_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "dmsim/addrmap.hpp"
#include "dmsim/config.hpp"
#include "dmsim/dram.hpp"
#include "dmsim/event.hpp"
#include "dmsim/fabric.hpp"
#include "dmsim/gmm.hpp"
#include "dmsim/metrics.hpp"
#include "dmsim/types.hpp"

namespace dmsim::engine {

// Trace-driven simulation of one run: injects LLC misses at their trace
// times (open loop), resolves pages, and carries each access through either
// the node's local memory or the fabric/pool round trip. Ports are laid out
// nodes first, pools after (pool p sits at port nodes + p).
class Engine {
public:
    Engine(const config::RunConfig& cfg, std::vector<uint32_t> node_benchmark_ids,
           std::vector<std::string> benchmark_labels);

    // Records must be globally non-decreasing in timestamp. Runs to quiescence.
    void run(const std::vector<LlcMissRecord>& trace);

    const metrics::Report& report() const { return *report_; }
    const gmm::Manager& gmm() const { return *gmm_; }
    const addrmap::NodeAddressMap& node_map(NodeId n) const { return *maps_[n]; }
    fabric::Fabric& fabric() { return *fabric_; }

    uint64_t injected_count() const { return injected_; }
    uint64_t completed_count() const { return completed_; }
    uint64_t oom_drop_count() const { return oom_drops_; }
    SimTime end_time() const { return end_time_; }

    // Observes every completion as it is recorded (metrics still aggregate).
    void set_completion_sink(std::function<void(const metrics::CompletionRecord&)> sink) {
        sink_ = std::move(sink);
    }

private:
    struct RequestCtx {
        NodeId node = 0;
        uint32_t benchmark = 0;
        PoolId pool = 0;
        uint64_t pool_addr = 0;
        SimTime t_send = 0;
        SimTime t_deliver_req = 0;
        SimTime t_dram_start = 0;
        SimTime t_dram_done = 0;
    };
    struct LocalPending {
        NodeId node = 0;
        uint32_t benchmark = 0;
        uint64_t addr = 0; // frame base + page offset
        SimTime t_inject = 0;
    };

    void inject(const std::vector<LlcMissRecord>& trace, size_t idx);
    void start_access(const LlcMissRecord& rec);
    void drain_local(NodeId node);
    void drain_pool(PoolId pool);
    void on_delivery(const fabric::Packet& pkt);
    void finish_remote(uint64_t token, SimTime t_deliver_resp);
    void emit(const metrics::CompletionRecord& rec);

    uint64_t alloc_token();
    void free_token(uint64_t token);

    config::RunConfig cfg_;
    std::vector<uint32_t> node_bench_;

    EventQueue eq_;
    std::unique_ptr<gmm::Manager> gmm_;
    std::vector<std::unique_ptr<addrmap::NodeAddressMap>> maps_;
    std::vector<std::unique_ptr<dram::MemoryDevice>> local_mem_; // one per node
    std::vector<std::unique_ptr<dram::MemoryDevice>> pool_mem_;  // one per pool
    std::unique_ptr<fabric::Fabric> fabric_;
    std::unique_ptr<metrics::Report> report_;

    std::vector<RequestCtx> slots_;
    std::vector<uint64_t> free_slots_;
    std::vector<std::deque<LocalPending>> local_pending_; // per node
    std::vector<std::deque<uint64_t>> pool_pending_;      // per pool, tokens

    std::function<void(const metrics::CompletionRecord&)> sink_;
    uint64_t injected_ = 0;
    uint64_t completed_ = 0;
    uint64_t oom_drops_ = 0;
    SimTime end_time_ = 0;
};

} // namespace dmsim::engine

#endif
