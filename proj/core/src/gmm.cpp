#include "dmsim/gmm.hpp"

#include <algorithm>

#include "dmsim/error.hpp"

namespace dmsim::gmm {

const char* pool_policy_name(PoolPolicy p) {
    switch (p) {
        case PoolPolicy::Random: return "random";
        case PoolPolicy::RoundRobin: return "round_robin";
        case PoolPolicy::SmartIdle: return "smart_idle";
    }
    return "?";
}

std::optional<PoolPolicy> pool_policy_from_name(const std::string& name) {
    if (name == "random") return PoolPolicy::Random;
    if (name == "round_robin") return PoolPolicy::RoundRobin;
    if (name == "smart_idle") return PoolPolicy::SmartIdle;
    return std::nullopt;
}

double access_factor(const WindowRing& ring) {
    return static_cast<double>(ring.w[0]) +
           static_cast<double>(ring.w[1] + ring.w[2] + ring.w[3]) / 3.0;
}

namespace {

std::vector<uint32_t> eligible_indices(const std::vector<PoolState>& pools,
                                       uint64_t chunk_bytes) {
    std::vector<uint32_t> out;
    out.reserve(pools.size());
    for (uint32_t i = 0; i < pools.size(); ++i) {
        if (pools[i].free_bytes() >= chunk_bytes) out.push_back(i);
    }
    return out;
}

} // namespace

std::optional<PoolId> select_pool_random(const std::vector<PoolState>& pools,
                                         uint64_t chunk_bytes, Rng& rng) {
    auto elig = eligible_indices(pools, chunk_bytes);
    if (elig.empty()) return std::nullopt;
    uint32_t pick = elig[rng.uniform_u64(elig.size())];
    return pools[pick].pool_id;
}

std::optional<PoolId> select_pool_round_robin(const std::vector<PoolState>& pools,
                                              uint64_t chunk_bytes, uint32_t& rr_cursor) {
    if (pools.empty()) return std::nullopt;
    uint32_t n = static_cast<uint32_t>(pools.size());
    // Scan forward from the slot after the previous grant, skipping full pools.
    for (uint32_t step = 1; step <= n; ++step) {
        uint32_t idx = (rr_cursor + step) % n;
        if (pools[idx].free_bytes() >= chunk_bytes) {
            rr_cursor = idx;
            return pools[idx].pool_id;
        }
    }
    return std::nullopt;
}

std::optional<PoolId> select_pool_smart_idle(const std::vector<PoolState>& pools,
                                             uint64_t chunk_bytes) {
    auto elig = eligible_indices(pools, chunk_bytes);
    if (elig.empty()) return std::nullopt;

    uint32_t n = static_cast<uint32_t>(pools.size());
    uint32_t m = ceil_log2(n);
    m = std::clamp<uint32_t>(m, 1u, n);

    // Rank eligible pools by (access factor, pool id); keep the quietest m.
    std::sort(elig.begin(), elig.end(), [&](uint32_t a, uint32_t b) {
        double fa = access_factor(pools[a].window_ring);
        double fb = access_factor(pools[b].window_ring);
        if (fa != fb) return fa < fb;
        return pools[a].pool_id < pools[b].pool_id;
    });
    if (elig.size() > m) elig.resize(m);

    // Least-allocated within the subset, ties to the lower pool id.
    uint32_t best = elig[0];
    for (uint32_t i = 1; i < elig.size(); ++i) {
        uint32_t cand = elig[i];
        if (pools[cand].allocated_bytes < pools[best].allocated_bytes ||
            (pools[cand].allocated_bytes == pools[best].allocated_bytes &&
             pools[cand].pool_id < pools[best].pool_id)) {
            best = cand;
        }
    }
    return pools[best].pool_id;
}

Manager::Manager(uint32_t pool_count, uint64_t pool_capacity_bytes, uint64_t chunk_bytes,
                 PoolPolicy policy, uint64_t seed)
    : chunk_bytes_(chunk_bytes),
      policy_(policy),
      rr_cursor_(pool_count == 0 ? 0 : pool_count - 1),
      rng_(Rng::fork(seed, /*stream=*/0xB00Cu)) {
    DMSIM_CHECK(pool_count > 0, "gmm: pool_count must be positive");
    DMSIM_CHECK(chunk_bytes_ > 0, "gmm: chunk_bytes must be positive");
    DMSIM_CHECK(pool_capacity_bytes >= chunk_bytes_,
                "gmm: pool capacity smaller than one chunk");
    pools_.resize(pool_count);
    for (uint32_t i = 0; i < pool_count; ++i) {
        pools_[i].pool_id = i;
        pools_[i].capacity_bytes = pool_capacity_bytes;
    }
}

void Manager::record_pool_access(PoolId pool) {
    DMSIM_CHECK(pool < pools_.size(), "gmm: access to unknown pool");
    pools_[pool].window_ring.w[0] += 1;
    pools_[pool].lifetime_access_count += 1;
}

void Manager::rotate_windows() {
    for (auto& p : pools_) {
        auto& w = p.window_ring.w;
        w[3] = w[2];
        w[2] = w[1];
        w[1] = w[0];
        w[0] = 0;
    }
}

std::optional<ChunkGrant> Manager::allocate_chunk(NodeId node, SimTime now) {
    std::optional<PoolId> pick;
    switch (policy_) {
        case PoolPolicy::Random: pick = select_pool_random(pools_, chunk_bytes_, rng_); break;
        case PoolPolicy::RoundRobin: pick = select_pool_round_robin(pools_, chunk_bytes_, rr_cursor_); break;
        case PoolPolicy::SmartIdle: pick = select_pool_smart_idle(pools_, chunk_bytes_); break;
    }
    if (!pick) {
        denied_ += 1;
        return std::nullopt;
    }
    PoolState& pool = pools_[*pick];
    ChunkGrant grant{pool.pool_id, pool.allocated_bytes, chunk_bytes_};
    pool.allocated_bytes += chunk_bytes_;

    grant_log_.push_back(GrantLogEntry{
        static_cast<uint64_t>(grant_log_.size()), policy_, pool.pool_id, node, now});
    rotate_windows();
    return grant;
}

} // namespace dmsim::gmm
