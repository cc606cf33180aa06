#ifndef DMSIM_CONFIG_HPP
#define DMSIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmsim/addrmap.hpp"
#include "dmsim/fabric.hpp"
#include "dmsim/gmm.hpp"
#include "dmsim/trace.hpp"
#include "dmsim/types.hpp"

namespace dmsim::config {

struct DramConfig {
    uint32_t local_channels = 1;
    uint32_t pool_channels = 2;
    uint32_t banks_per_channel = 8;
    uint32_t queue_capacity = 64;
    SimTime t_access_ps = 46'000;
};

struct CacheLevelConfig {
    uint64_t size_bytes = 0;
    uint32_t ways = 1;
    uint32_t latency_cycles = 0; // total load-to-use latency when this level hits
};

struct FrontendConfig {
    CacheLevelConfig l1{32 * 1024, 8, 4};
    CacheLevelConfig l2{256 * 1024, 4, 12};
    CacheLevelConfig l3{16 * 1024 * 1024, 16, 41};
    uint32_t tlb_entries = 64;
    uint32_t tlb_ways = 4;
    uint32_t tlb_miss_cycles = 60;
};

struct WorkloadSpec {
    enum class Kind : uint8_t { Preset, Trace };
    Kind kind = Kind::Preset;
    std::string value; // preset label or trace file path

    bool operator==(const WorkloadSpec&) const = default;
};

// Effective run configuration. Defaults model the full rack; the shipped
// desk profile overrides a handful of keys to finish in minutes.
struct RunConfig {
    uint32_t nodes = 64;
    uint32_t pools = 6;
    uint64_t local_bytes = 256ull * 1024 * 1024;
    uint64_t pool_capacity_bytes = 32ull * 1024 * 1024 * 1024;
    uint64_t chunk_bytes = 4ull * 1024 * 1024;
    addrmap::PagePolicy page_policy = addrmap::PagePolicy::LocalFirst;
    gmm::PoolPolicy pool_policy = gmm::PoolPolicy::RoundRobin;
    uint64_t seed = 1;
    uint64_t epoch_cycles = 1'500'000;
    SimTime cycle_ps = kCyclePs;
    std::string out_dir = "out";

    fabric::FabricParams fabric;
    DramConfig dram;
    FrontendConfig frontend;

    // Distributed over nodes in contiguous, near-equal groups (node i runs
    // workloads[i * W / N]).
    std::vector<WorkloadSpec> workloads;
    double synth_scale = 1.0;
    uint64_t synth_burst_len = 64;
    double synth_hot_access_fraction = 0.9;

    // Label -> generator preset; starts as the built-in table, extendable
    // and overridable from the config file.
    std::map<std::string, trace::WorkloadPreset> presets;

    uint32_t workload_group_of(NodeId node) const;
    const WorkloadSpec& workload_of(NodeId node) const;

    void validate() const; // throws ConfigError

    // Canonical key=value text: every effective key, sorted, one per line.
    // Excludes out_dir (output placement does not affect simulation results).
    // Parsing the echo reproduces this config exactly.
    std::string echo() const;
    uint64_t echo_hash() const; // FNV-1a over echo()
};

// Built-in WL-Mix generator presets.
std::map<std::string, trace::WorkloadPreset> builtin_presets();

RunConfig default_config();

// Parses flat `key=value` text ('#' starts a comment). Unknown keys, bad
// values, and violated invariants throw ConfigError naming key and line.
// validate=false defers the invariant check (callers that still apply
// overrides validate once at the end).
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            bool validate = true);
RunConfig load_config(const std::string& path, bool validate = true);

// Applies one key=value pair (CLI override); line 0 in error messages.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& origin, size_t line_no);

} // namespace dmsim::config

#endif
