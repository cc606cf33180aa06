#include <doctest.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "dmsim/gmm.hpp"
#include "dmsim/rng.hpp"

using namespace dmsim;
using namespace dmsim::gmm;

namespace {

PoolState mk_pool(PoolId id, uint64_t cap, uint64_t alloc, uint64_t w0 = 0, uint64_t w1 = 0,
                  uint64_t w2 = 0, uint64_t w3 = 0) {
    PoolState p;
    p.pool_id = id;
    p.capacity_bytes = cap;
    p.allocated_bytes = alloc;
    p.window_ring.w[0] = w0;
    p.window_ring.w[1] = w1;
    p.window_ring.w[2] = w2;
    p.window_ring.w[3] = w3;
    return p;
}

// Reference selector, written from the documented two-step rule with its own
// data flow: filter, rank by (Af, id), cut to the subset, then least
// allocated with id tie-break.
std::optional<PoolId> reference_smart_idle(const std::vector<PoolState>& pools,
                                           uint64_t chunk_bytes) {
    struct Cand {
        double af;
        uint64_t alloc;
        PoolId id;
    };
    std::vector<Cand> cands;
    for (const auto& p : pools) {
        if (p.capacity_bytes - p.allocated_bytes < chunk_bytes) continue;
        double af = static_cast<double>(p.window_ring.w[0]) +
                    static_cast<double>(p.window_ring.w[1] + p.window_ring.w[2] +
                                        p.window_ring.w[3]) /
                        3.0;
        cands.push_back(Cand{af, p.allocated_bytes, p.pool_id});
    }
    if (cands.empty()) return std::nullopt;

    uint64_t n = pools.size();
    uint64_t m = 0;
    while ((1ull << m) < n) ++m; // smallest m with 2^m >= n
    uint64_t subset = std::clamp<uint64_t>(m, 1, n);

    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.af != b.af) return a.af < b.af;
        return a.id < b.id;
    });
    if (cands.size() > subset) cands.resize(subset);
    const Cand* best = &cands[0];
    for (const Cand& c : cands) {
        if (c.alloc < best->alloc || (c.alloc == best->alloc && c.id < best->id)) best = &c;
    }
    return best->id;
}

} // namespace

TEST_SUITE("gmm") {

TEST_CASE("access factor frozen values") {
    CHECK(access_factor(WindowRing{{0, 0, 0, 0}}) == 0.0);
    CHECK(access_factor(WindowRing{{900, 300, 300, 300}}) == 1200.0);
    CHECK(access_factor(WindowRing{{0, 600, 0, 0}}) == 200.0);
    CHECK(access_factor(WindowRing{{12, 3, 3, 3}}) == 15.0);
    CHECK(access_factor(WindowRing{{6, 0, 0, 1}}) == 6.0 + 1.0 / 3.0);
    CHECK(access_factor(WindowRing{{0, 1, 1, 0}}) == 2.0 / 3.0);
}

TEST_CASE("access factor weighs the newest window fully, older ones by a third") {
    // Moving the same count from an old slot to the newest one triples its
    // contribution.
    double old_slot = access_factor(WindowRing{{0, 9, 0, 0}});
    double new_slot = access_factor(WindowRing{{9, 0, 0, 0}});
    CHECK(new_slot == 3.0 * old_slot);
}

TEST_CASE("window rotation shifts and clears the open window") {
    Manager mgr(2, 1 << 20, 1 << 16, PoolPolicy::RoundRobin, 1);
    for (int i = 0; i < 5; ++i) mgr.record_pool_access(0);
    mgr.rotate_windows();
    for (int i = 0; i < 4; ++i) mgr.record_pool_access(0);
    mgr.rotate_windows();
    for (int i = 0; i < 3; ++i) mgr.record_pool_access(0);

    const auto& w = mgr.pools()[0].window_ring.w;
    CHECK(w[0] == 3);
    CHECK(w[1] == 4);
    CHECK(w[2] == 5);
    CHECK(w[3] == 0);

    mgr.rotate_windows();
    mgr.rotate_windows();
    const auto& w2 = mgr.pools()[0].window_ring.w;
    CHECK(w2[0] == 0);
    CHECK(w2[1] == 0);
    CHECK(w2[2] == 3);
    CHECK(w2[3] == 4); // the 5 fell off the end
}

TEST_CASE("round-robin selector cycles and skips full pools") {
    std::vector<PoolState> pools = {mk_pool(0, 100, 0), mk_pool(1, 100, 0),
                                    mk_pool(2, 100, 0)};
    uint32_t cursor = 2; // as a fresh manager would start (n-1)
    CHECK(select_pool_round_robin(pools, 10, cursor) == 0);
    CHECK(select_pool_round_robin(pools, 10, cursor) == 1);
    CHECK(select_pool_round_robin(pools, 10, cursor) == 2);
    CHECK(select_pool_round_robin(pools, 10, cursor) == 0);

    pools[1].allocated_bytes = 95; // cannot fit 10 any more
    CHECK(select_pool_round_robin(pools, 10, cursor) == 2);
    CHECK(select_pool_round_robin(pools, 10, cursor) == 0);
    CHECK(select_pool_round_robin(pools, 10, cursor) == 2);

    pools[0].allocated_bytes = 100;
    pools[2].allocated_bytes = 100;
    CHECK(select_pool_round_robin(pools, 10, cursor) == std::nullopt);
}

TEST_CASE("random selector only picks eligible pools") {
    std::vector<PoolState> pools = {mk_pool(0, 100, 100), mk_pool(1, 100, 0),
                                    mk_pool(2, 100, 100), mk_pool(3, 100, 0)};
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        auto pick = select_pool_random(pools, 10, rng);
        REQUIRE(pick.has_value());
        CHECK((*pick == 1 || *pick == 3));
    }
    std::vector<PoolState> full = {mk_pool(0, 100, 95)};
    CHECK(select_pool_random(full, 10, rng) == std::nullopt);
}

TEST_CASE("smart-idle picks the least-allocated of the quiet subset") {
    // n=4 -> subset of 2 lowest-Af pools.
    std::vector<PoolState> pools = {
        mk_pool(0, 1000, 500, /*w0=*/90), // busy
        mk_pool(1, 1000, 400, /*w0=*/10), // quiet, more allocated than 3
        mk_pool(2, 1000, 100, /*w0=*/50), // moderately busy, least allocated
        mk_pool(3, 1000, 300, /*w0=*/5),  // quietest
    };
    // Subset = {3, 1}; least allocated of those is 3.
    CHECK(select_pool_smart_idle(pools, 10) == 3);

    // Allocation tie inside the subset goes to the lower pool id.
    pools[1].allocated_bytes = 300;
    CHECK(select_pool_smart_idle(pools, 10) == 1);

    // Af tie at the subset boundary admits the lower pool id.
    std::vector<PoolState> tie = {
        mk_pool(0, 1000, 900, /*w0=*/10),
        mk_pool(1, 1000, 100, /*w0=*/10),
        mk_pool(2, 1000, 50, /*w0=*/90),
        mk_pool(3, 1000, 0, /*w0=*/90),
    };
    // Subset by (Af, id) = {0, 1}; least allocated is 1.
    CHECK(select_pool_smart_idle(tie, 10) == 1);
}

TEST_CASE("smart-idle ignores pools that cannot fit a chunk") {
    std::vector<PoolState> pools = {
        mk_pool(0, 100, 95, /*w0=*/0),  // quietest but full
        mk_pool(1, 100, 50, /*w0=*/80), // busy but has room
    };
    CHECK(select_pool_smart_idle(pools, 10) == 1);
    pools[1].allocated_bytes = 95;
    CHECK(select_pool_smart_idle(pools, 10) == std::nullopt);
}

TEST_CASE("smart-idle matches the reference on randomized states") {
    Rng rng(0xC0FFEE);
    for (uint32_t n = 1; n <= 16; ++n) {
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<PoolState> pools;
            for (uint32_t i = 0; i < n; ++i) {
                uint64_t cap = 1000;
                uint64_t alloc = rng.uniform_u64(11) * 100; // may be full
                pools.push_back(mk_pool(i, cap, alloc, rng.uniform_u64(5) * 10,
                                        rng.uniform_u64(5) * 10, rng.uniform_u64(5) * 10,
                                        rng.uniform_u64(5) * 10));
            }
            auto got = select_pool_smart_idle(pools, 100);
            auto want = reference_smart_idle(pools, 100);
            CHECK(got == want);
        }
    }
}

TEST_CASE("manager grants bump offsets per pool and rotates windows once per grant") {
    Manager mgr(2, /*capacity=*/4 << 16, /*chunk=*/1 << 16, PoolPolicy::RoundRobin, 1);

    mgr.record_pool_access(0);
    mgr.record_pool_access(0);
    auto g0 = mgr.allocate_chunk(7, 100);
    REQUIRE(g0.has_value());
    CHECK(g0->pool_id == 0); // fresh round robin starts at pool 0
    CHECK(g0->base_offset == 0);
    CHECK(g0->size == 1 << 16);

    // The two accesses were in the open window; the grant closed it.
    CHECK(mgr.pools()[0].window_ring.w[0] == 0);
    CHECK(mgr.pools()[0].window_ring.w[1] == 2);

    auto g1 = mgr.allocate_chunk(7, 200);
    REQUIRE(g1.has_value());
    CHECK(g1->pool_id == 1);
    CHECK(g1->base_offset == 0);
    auto g2 = mgr.allocate_chunk(8, 300);
    REQUIRE(g2.has_value());
    CHECK(g2->pool_id == 0);
    CHECK(g2->base_offset == 1 << 16); // second chunk in pool 0

    CHECK(mgr.pools()[0].window_ring.w[3] == 2); // two more rotations later

    const auto& log = mgr.grant_log();
    REQUIRE(log.size() == 3);
    CHECK(log[0].grant_index == 0);
    CHECK(log[0].node_id == 7);
    CHECK(log[0].sim_time == 100);
    CHECK(log[2].grant_index == 2);
    CHECK(log[2].node_id == 8);
    CHECK(log[1].policy == PoolPolicy::RoundRobin);
}

TEST_CASE("manager denies when every pool is full") {
    Manager mgr(2, 1 << 16, 1 << 16, PoolPolicy::SmartIdle, 1);
    CHECK(mgr.allocate_chunk(0, 0).has_value());
    CHECK(mgr.allocate_chunk(0, 1).has_value());
    CHECK_FALSE(mgr.allocate_chunk(0, 2).has_value());
    CHECK(mgr.denied_count() == 1);
    CHECK(mgr.grant_log().size() == 2);
    CHECK(mgr.pools()[0].allocated_bytes == 1 << 16);
    CHECK(mgr.pools()[1].allocated_bytes == 1 << 16);
}

TEST_CASE("policy name round trips") {
    for (PoolPolicy p : {PoolPolicy::Random, PoolPolicy::RoundRobin, PoolPolicy::SmartIdle}) {
        CHECK(pool_policy_from_name(pool_policy_name(p)) == p);
    }
    CHECK_FALSE(pool_policy_from_name("fastest").has_value());
}

} // TEST_SUITE
