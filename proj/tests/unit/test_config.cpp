#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "dmsim/config.hpp"
#include "dmsim/error.hpp"

using namespace dmsim;
using namespace dmsim::config;
using doctest::Contains;

TEST_SUITE("config") {

TEST_CASE("defaults describe the full rack") {
    RunConfig cfg = default_config();
    CHECK(cfg.nodes == 64);
    CHECK(cfg.pools == 6);
    CHECK(cfg.local_bytes == 256ull * 1024 * 1024);
    CHECK(cfg.pool_capacity_bytes == 32ull * 1024 * 1024 * 1024);
    CHECK(cfg.chunk_bytes == 4ull * 1024 * 1024);
    CHECK(cfg.page_policy == addrmap::PagePolicy::LocalFirst);
    CHECK(cfg.pool_policy == gmm::PoolPolicy::RoundRobin);
    CHECK(cfg.cycle_ps == kCyclePs);
    REQUIRE(cfg.workloads.size() == 4);
    CHECK(cfg.workloads[0].value == "lbm_s");
    CHECK(cfg.presets.at("lbm_s").total_accesses == 45'470'000);
    CHECK(cfg.presets.at("lbm_s").footprint_bytes == 2'700'000'000ull);
    CHECK(cfg.presets.at("fotonik3d_s").mean_gap_cycles == 760);
    CHECK(cfg.presets.at("fft").total_accesses == 15'810'000);
    CHECK(cfg.presets.at("fmm").footprint_bytes == 3'200'000'000ull);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("key=value text parses with comments and suffixes") {
    const std::string text =
        "# a comment line\n"
        "nodes = 8\n"
        "pools=4   # trailing comment\n"
        "\n"
        "local_bytes = 16M\n"
        "pool_capacity_bytes = 2G\n"
        "chunk_bytes = 64K\n"
        "page_policy = alternate\n"
        "pool_policy = smart_idle\n"
        "seed=42\n";
    RunConfig cfg = parse_config_text(text, "test.cfg");
    CHECK(cfg.nodes == 8);
    CHECK(cfg.pools == 4);
    CHECK(cfg.local_bytes == 16ull * 1024 * 1024);
    CHECK(cfg.pool_capacity_bytes == 2ull * 1024 * 1024 * 1024);
    CHECK(cfg.chunk_bytes == 64 * 1024);
    CHECK(cfg.page_policy == addrmap::PagePolicy::AlternateLocalRemote);
    CHECK(cfg.pool_policy == gmm::PoolPolicy::SmartIdle);
    CHECK(cfg.seed == 42);
}

TEST_CASE("byte suffixes accept K/M/G and KB/MB/GB in any case") {
    RunConfig cfg = default_config();
    apply_key(cfg, "frontend.l1_bytes", "32KB", "cli", 0);
    CHECK(cfg.frontend.l1.size_bytes == 32 * 1024);
    apply_key(cfg, "frontend.l1_bytes", "1k", "cli", 0);
    CHECK(cfg.frontend.l1.size_bytes == 1024);
    apply_key(cfg, "frontend.l1_bytes", "4096", "cli", 0);
    CHECK(cfg.frontend.l1.size_bytes == 4096);
    apply_key(cfg, "local_bytes", "1gb", "cli", 0);
    CHECK(cfg.local_bytes == 1024ull * 1024 * 1024);
}

TEST_CASE("parse errors name the origin, line, and key") {
    CHECK_THROWS_WITH_AS(parse_config_text("nodes=8\nbogus=1\n", "test.cfg"),
                         Contains("test.cfg:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("bogus=1\n", "test.cfg"),
                         Contains("unknown key 'bogus'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("nodes=abc\n", "test.cfg"),
                         Contains("key 'nodes'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("no equals sign\n", "test.cfg"),
                         Contains("test.cfg:1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("workloads=foo:bar\n", "test.cfg"),
                         Contains("preset: or trace:"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("page_policy=nope\n", "test.cfg"),
                         Contains("unknown policy 'nope'"), ConfigError);
    RunConfig cfg = default_config();
    CHECK_THROWS_WITH_AS(apply_key(cfg, "zzz", "1", "cli", 0),
                         Contains("cli: unknown key"), ConfigError);
}

TEST_CASE("validate rejects inconsistent configurations") {
    CHECK_THROWS_WITH_AS(parse_config_text("pools=0\n", "t"), Contains("pools"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("chunk_bytes=1000\n", "t"),
                         Contains("chunk_bytes"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("workloads=preset:nope\n", "t"),
                         Contains("nope"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("nodes=2\n", "t"),
                         Contains("more workloads than nodes"), ConfigError);
    // validate=false defers the check so overrides can fix things up.
    RunConfig cfg = parse_config_text("nodes=2\n", "t", false);
    apply_key(cfg, "workloads", "preset:fft", "cli", 0);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("echo is canonical: sorted, reparseable, and stable") {
    RunConfig cfg = default_config();
    std::string echo = cfg.echo();
    RunConfig again = parse_config_text(echo, "echo");
    CHECK(again.echo() == echo);
    CHECK(again.echo_hash() == cfg.echo_hash());

    // Sorted line order.
    std::string prev;
    std::istringstream is(echo);
    std::string line;
    while (std::getline(is, line)) {
        CHECK(prev <= line);
        prev = line;
    }
}

TEST_CASE("the hash tracks every simulation-relevant key") {
    RunConfig a = default_config();
    RunConfig b = default_config();
    apply_key(b, "seed", "2", "cli", 0);
    CHECK(a.echo_hash() != b.echo_hash());

    RunConfig c = default_config();
    apply_key(c, "preset.lbm_s.mean_gap_cycles", "100", "cli", 0);
    CHECK(a.echo_hash() != c.echo_hash());
}

TEST_CASE("out_dir stays out of the echo and the hash") {
    RunConfig a = default_config();
    RunConfig b = default_config();
    b.out_dir = "/somewhere/else";
    CHECK(a.echo() == b.echo());
    CHECK(a.echo_hash() == b.echo_hash());
    CHECK(a.echo().find("out_dir") == std::string::npos);
}

TEST_CASE("preset fields can be overridden and new presets defined") {
    RunConfig cfg = parse_config_text(
        "preset.lbm_s.mean_gap_cycles=100\n"
        "preset.mine.accesses=1000\n"
        "preset.mine.footprint_bytes=1M\n"
        "preset.mine.burstiness=0.25\n"
        "workloads=preset:mine\n",
        "t");
    CHECK(cfg.presets.at("lbm_s").mean_gap_cycles == 100);
    CHECK(cfg.presets.at("lbm_s").total_accesses == 45'470'000); // untouched
    CHECK(cfg.presets.at("mine").total_accesses == 1000);
    CHECK(cfg.presets.at("mine").footprint_bytes == 1024 * 1024);
    CHECK(cfg.presets.at("mine").locality.burstiness == doctest::Approx(0.25));
    CHECK(cfg.workload_of(0).value == "mine");
}

TEST_CASE("an incomplete new preset fails validation when referenced") {
    CHECK_THROWS_WITH_AS(parse_config_text("preset.mine.accesses=1000\n"
                                           "workloads=preset:mine\n",
                                           "t"),
                         Contains("mine"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("preset.x=1\n", "t"),
                         Contains("preset.<label>.<field>"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("preset.mine.bogus=1\n", "t"),
                         Contains("unknown preset field"), ConfigError);
}

TEST_CASE("nodes map onto workloads in contiguous near-equal groups") {
    RunConfig cfg = parse_config_text("nodes=8\n", "t");
    REQUIRE(cfg.workloads.size() == 4);
    std::vector<uint32_t> groups;
    for (NodeId n = 0; n < 8; ++n) groups.push_back(cfg.workload_group_of(n));
    CHECK(groups == std::vector<uint32_t>{0, 0, 1, 1, 2, 2, 3, 3});

    RunConfig uneven = parse_config_text("nodes=6\n", "t");
    std::vector<uint32_t> g6;
    for (NodeId n = 0; n < 6; ++n) g6.push_back(uneven.workload_group_of(n));
    CHECK(g6 == std::vector<uint32_t>{0, 0, 1, 2, 2, 3});
}

} // TEST_SUITE
