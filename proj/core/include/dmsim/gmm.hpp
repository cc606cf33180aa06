#ifndef DMSIM_GMM_HPP
#define DMSIM_GMM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmsim/rng.hpp"
#include "dmsim/types.hpp"

namespace dmsim::gmm {

enum class PoolPolicy : uint8_t { Random, RoundRobin, SmartIdle };

const char* pool_policy_name(PoolPolicy p);
std::optional<PoolPolicy> pool_policy_from_name(const std::string& name);

// Per-pool access counts of the four most recent windows. w[0] is the window
// in progress (it closes at the next chunk grant), w[1..3] are older windows.
struct WindowRing {
    uint64_t w[4] = {0, 0, 0, 0};
};

// Af = w_n + (w_{n-1} + w_{n-2} + w_{n-3}) / 3, evaluated at a window
// boundary where w[0] is the window the boundary just closed. Exact real
// division; a lower value means less recent traffic.
double access_factor(const WindowRing& ring);

struct PoolState {
    PoolId pool_id = 0;
    uint64_t capacity_bytes = 0;
    uint64_t allocated_bytes = 0;
    WindowRing window_ring;
    uint64_t lifetime_access_count = 0;

    uint64_t free_bytes() const { return capacity_bytes - allocated_bytes; }
};

struct ChunkGrant {
    PoolId pool_id = 0;
    uint64_t base_offset = 0; // pool-local byte offset (bump allocation)
    uint64_t size = 0;
};

struct GrantLogEntry {
    uint64_t grant_index = 0;
    PoolPolicy policy = PoolPolicy::RoundRobin;
    PoolId pool_id = 0;
    NodeId node_id = 0;
    SimTime sim_time = 0;
};

// Stateless selectors over a pool snapshot; pools without room for one chunk
// are excluded before any policy sees them. Return std::nullopt when every
// pool is full. Exposed so tests can drive them on hand-built states.
std::optional<PoolId> select_pool_random(const std::vector<PoolState>& pools,
                                         uint64_t chunk_bytes, Rng& rng);
std::optional<PoolId> select_pool_round_robin(const std::vector<PoolState>& pools,
                                              uint64_t chunk_bytes, uint32_t& rr_cursor);
// Two steps: the m = ceil(log2(n)) pools with lowest access factor (ties to
// the lower pool id), then the least-allocated pool within that subset (ties
// to the lower pool id again). n counts all pools, clamped to [1, n].
std::optional<PoolId> select_pool_smart_idle(const std::vector<PoolState>& pools,
                                             uint64_t chunk_bytes);

// Global memory manager: owns pool allocation state, per-window access
// counters, and the pool-selection policy. Single-owner, sequential.
class Manager {
public:
    Manager(uint32_t pool_count, uint64_t pool_capacity_bytes, uint64_t chunk_bytes,
            PoolPolicy policy, uint64_t seed);

    void record_pool_access(PoolId pool);

    // Shifts every pool's ring: the oldest window drops, w[0] becomes w[1],
    // and a fresh zero window opens.
    void rotate_windows();

    // Policy-selected grant of one chunk. Every grant is a window boundary,
    // so the rings rotate exactly once per grant (for all policies, keeping
    // the traffic metric policy-independent). Returns std::nullopt and
    // counts a denial when no pool can hold a chunk.
    std::optional<ChunkGrant> allocate_chunk(NodeId node, SimTime now);

    const std::vector<PoolState>& pools() const { return pools_; }
    std::vector<PoolState>& pools_for_test() { return pools_; }
    const std::vector<GrantLogEntry>& grant_log() const { return grant_log_; }
    uint64_t denied_count() const { return denied_; }
    uint64_t chunk_bytes() const { return chunk_bytes_; }
    PoolPolicy policy() const { return policy_; }
    uint32_t rr_cursor() const { return rr_cursor_; }

private:
    std::vector<PoolState> pools_;
    uint64_t chunk_bytes_;
    PoolPolicy policy_;
    uint32_t rr_cursor_; // last granted pool index; starts at n-1 so grant 0 lands on pool 0
    Rng rng_;
    std::vector<GrantLogEntry> grant_log_;
    uint64_t denied_ = 0;
};

} // namespace dmsim::gmm

#endif
