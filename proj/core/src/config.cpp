#include "dmsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dmsim/error.hpp"

namespace dmsim::config {

namespace {

[[noreturn]] void fail(const std::string& origin, size_t line_no, const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (line_no > 0) os << ":" << line_no;
    os << ": " << msg;
    throw ConfigError(os.str());
}

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Unsigned integer with an optional binary suffix: K/M/G or KB/MB/GB, 1024-based.
uint64_t parse_bytes(const std::string& v, const std::string& origin, size_t line_no,
                     const std::string& key) {
    std::string s = v;
    uint64_t mult = 1;
    auto ends_with = [&](const char* suf) {
        size_t n = strlen(suf);
        if (s.size() <= n) return false;
        for (size_t i = 0; i < n; ++i) {
            if (std::toupper(static_cast<unsigned char>(s[s.size() - n + i])) != suf[i]) return false;
        }
        return true;
    };
    if (ends_with("KB") || ends_with("MB") || ends_with("GB")) s.pop_back();
    if (!s.empty()) {
        char last = static_cast<char>(std::toupper(static_cast<unsigned char>(s.back())));
        if (last == 'K') mult = 1024ull;
        if (last == 'M') mult = 1024ull * 1024;
        if (last == 'G') mult = 1024ull * 1024 * 1024;
        if (mult != 1) s.pop_back();
    }
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        fail(origin, line_no, "key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
    return out * mult;
}

uint64_t parse_u64(const std::string& v, const std::string& origin, size_t line_no,
                   const std::string& key) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        fail(origin, line_no, "key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
    return out;
}

uint32_t parse_u32(const std::string& v, const std::string& origin, size_t line_no,
                   const std::string& key) {
    uint64_t out = parse_u64(v, origin, line_no, key);
    if (out > UINT32_MAX) fail(origin, line_no, "key '" + key + "': value too large");
    return static_cast<uint32_t>(out);
}

double parse_f64(const std::string& v, const std::string& origin, size_t line_no,
                 const std::string& key) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        fail(origin, line_no, "key '" + key + "': expected a number, got '" + v + "'");
    }
    return out;
}

SimTime parse_time_ps(const std::string& v, const std::string& origin, size_t line_no,
                      const std::string& key) {
    uint64_t out = parse_u64(v, origin, line_no, key);
    if (out > INT64_MAX) fail(origin, line_no, "key '" + key + "': value too large");
    return static_cast<SimTime>(out);
}

std::vector<WorkloadSpec> parse_workloads(const std::string& v, const std::string& origin,
                                          size_t line_no) {
    std::vector<WorkloadSpec> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(origin, line_no, "key 'workloads': empty list entry");
        WorkloadSpec spec;
        if (item.rfind("preset:", 0) == 0) {
            spec.kind = WorkloadSpec::Kind::Preset;
            spec.value = item.substr(7);
        } else if (item.rfind("trace:", 0) == 0) {
            spec.kind = WorkloadSpec::Kind::Trace;
            spec.value = item.substr(6);
        } else {
            fail(origin, line_no,
                 "key 'workloads': entry '" + item + "' must start with preset: or trace:");
        }
        if (spec.value.empty()) {
            fail(origin, line_no, "key 'workloads': entry '" + item + "' names nothing");
        }
        out.push_back(std::move(spec));
    }
    if (out.empty()) fail(origin, line_no, "key 'workloads': empty list");
    return out;
}

} // namespace

std::map<std::string, trace::WorkloadPreset> builtin_presets() {
    // WL-Mix components. Access counts and footprints follow the benchmark
    // table; footprints use decimal GB. Gap means are picked so the four
    // streams span a similar stretch of simulated time.
    std::map<std::string, trace::WorkloadPreset> out;
    auto add = [&](const char* label, double accesses_m, double footprint_gb,
                   uint64_t gap_cycles) {
        trace::WorkloadPreset p;
        p.label = label;
        p.total_accesses = static_cast<uint64_t>(accesses_m * 1e6);
        p.footprint_bytes = static_cast<uint64_t>(footprint_gb * 1e9);
        p.mean_gap_cycles = gap_cycles;
        out[p.label] = p;
    };
    add("lbm_s", 45.47, 2.7, 200);
    add("fotonik3d_s", 11.92, 0.57, 760);
    add("fft", 15.81, 1.06, 575);
    add("fmm", 12.5, 3.20, 730);
    return out;
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.presets = builtin_presets();
    cfg.workloads = {
        {WorkloadSpec::Kind::Preset, "lbm_s"},
        {WorkloadSpec::Kind::Preset, "fotonik3d_s"},
        {WorkloadSpec::Kind::Preset, "fft"},
        {WorkloadSpec::Kind::Preset, "fmm"},
    };
    return cfg;
}

uint32_t RunConfig::workload_group_of(NodeId node) const {
    DMSIM_CHECK(node < nodes, "config: node id out of range");
    return static_cast<uint32_t>(static_cast<uint64_t>(node) * workloads.size() / nodes);
}

const WorkloadSpec& RunConfig::workload_of(NodeId node) const {
    return workloads[workload_group_of(node)];
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& origin, size_t line_no) {
    auto bad_policy = [&](const char* which) {
        fail(origin, line_no, std::string("key '") + which + "': unknown policy '" + value + "'");
    };

    if (key == "nodes") cfg.nodes = parse_u32(value, origin, line_no, key);
    else if (key == "pools") cfg.pools = parse_u32(value, origin, line_no, key);
    else if (key == "local_bytes") cfg.local_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "pool_capacity_bytes") cfg.pool_capacity_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "chunk_bytes") cfg.chunk_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "page_policy") {
        auto p = addrmap::page_policy_from_name(value);
        if (!p) bad_policy("page_policy");
        cfg.page_policy = *p;
    } else if (key == "pool_policy") {
        auto p = gmm::pool_policy_from_name(value);
        if (!p) bad_policy("pool_policy");
        cfg.pool_policy = *p;
    } else if (key == "seed") cfg.seed = parse_u64(value, origin, line_no, key);
    else if (key == "epoch_cycles") cfg.epoch_cycles = parse_u64(value, origin, line_no, key);
    else if (key == "cycle_ps") cfg.cycle_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "workloads") cfg.workloads = parse_workloads(value, origin, line_no);
    else if (key == "synth.scale") cfg.synth_scale = parse_f64(value, origin, line_no, key);
    else if (key == "synth.burst_len") cfg.synth_burst_len = parse_u64(value, origin, line_no, key);
    else if (key == "synth.hot_access_fraction") cfg.synth_hot_access_fraction = parse_f64(value, origin, line_no, key);
    else if (key == "fabric.prep_ps") cfg.fabric.prep_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "fabric.nic_ps") cfg.fabric.nic_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "fabric.prop_ps") cfg.fabric.prop_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "fabric.switch_ps") cfg.fabric.switch_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "fabric.link_rate_bps") cfg.fabric.link_rate_bps = parse_u64(value, origin, line_no, key);
    else if (key == "fabric.request_bytes") cfg.fabric.request_bytes = parse_u32(value, origin, line_no, key);
    else if (key == "fabric.response_bytes") cfg.fabric.response_bytes = parse_u32(value, origin, line_no, key);
    else if (key == "fabric.voq_capacity_bytes") cfg.fabric.voq_capacity_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "fabric.ingress_capacity_bytes") cfg.fabric.ingress_capacity_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "dram.local_channels") cfg.dram.local_channels = parse_u32(value, origin, line_no, key);
    else if (key == "dram.pool_channels") cfg.dram.pool_channels = parse_u32(value, origin, line_no, key);
    else if (key == "dram.banks") cfg.dram.banks_per_channel = parse_u32(value, origin, line_no, key);
    else if (key == "dram.queue_capacity") cfg.dram.queue_capacity = parse_u32(value, origin, line_no, key);
    else if (key == "dram.t_access_ps") cfg.dram.t_access_ps = parse_time_ps(value, origin, line_no, key);
    else if (key == "frontend.l1_bytes") cfg.frontend.l1.size_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "frontend.l1_ways") cfg.frontend.l1.ways = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.l1_latency") cfg.frontend.l1.latency_cycles = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.l2_bytes") cfg.frontend.l2.size_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "frontend.l2_ways") cfg.frontend.l2.ways = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.l2_latency") cfg.frontend.l2.latency_cycles = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.l3_bytes") cfg.frontend.l3.size_bytes = parse_bytes(value, origin, line_no, key);
    else if (key == "frontend.l3_ways") cfg.frontend.l3.ways = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.l3_latency") cfg.frontend.l3.latency_cycles = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.tlb_entries") cfg.frontend.tlb_entries = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.tlb_ways") cfg.frontend.tlb_ways = parse_u32(value, origin, line_no, key);
    else if (key == "frontend.tlb_miss_cycles") cfg.frontend.tlb_miss_cycles = parse_u32(value, origin, line_no, key);
    else if (key.rfind("preset.", 0) == 0) {
        std::string rest = key.substr(7);
        size_t dot = rest.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size()) {
            fail(origin, line_no, "key '" + key + "': expected preset.<label>.<field>");
        }
        std::string label = rest.substr(0, dot);
        std::string field = rest.substr(dot + 1);
        auto it = cfg.presets.find(label);
        if (it == cfg.presets.end()) {
            trace::WorkloadPreset p;
            p.label = label;
            it = cfg.presets.emplace(label, std::move(p)).first;
        }
        trace::WorkloadPreset& p = it->second;
        if (field == "accesses") p.total_accesses = parse_u64(value, origin, line_no, key);
        else if (field == "footprint_bytes") p.footprint_bytes = parse_bytes(value, origin, line_no, key);
        else if (field == "write_fraction") p.write_fraction = parse_f64(value, origin, line_no, key);
        else if (field == "mean_gap_cycles") p.mean_gap_cycles = parse_u64(value, origin, line_no, key);
        else if (field == "sequential_fraction") p.locality.sequential_fraction = parse_f64(value, origin, line_no, key);
        else if (field == "hot_set_fraction") p.locality.hot_set_fraction = parse_f64(value, origin, line_no, key);
        else if (field == "burstiness") p.locality.burstiness = parse_f64(value, origin, line_no, key);
        else fail(origin, line_no, "key '" + key + "': unknown preset field '" + field + "'");
    } else {
        fail(origin, line_no, "unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            bool validate) {
    RunConfig cfg = default_config();
    std::istringstream is(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = trim(line);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected key=value, got '" + s + "'");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        apply_key(cfg, key, value, origin, line_no);
    }
    if (validate) cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, bool validate) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path, validate);
}

void RunConfig::validate() const {
    auto bad = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (nodes < 1) bad("nodes must be at least 1");
    if (pools < 1) bad("pools must be at least 1");
    if (local_bytes % kPageBytes != 0) bad("local_bytes must be a multiple of the page size");
    if (chunk_bytes == 0 || chunk_bytes % kPageBytes != 0) {
        bad("chunk_bytes must be a positive multiple of the page size");
    }
    if (pool_capacity_bytes < chunk_bytes) bad("pool_capacity_bytes smaller than one chunk");
    if (epoch_cycles == 0) bad("epoch_cycles must be positive");
    if (cycle_ps <= 0) bad("cycle_ps must be positive");
    if (workloads.empty()) bad("workloads list is empty");
    if (workloads.size() > nodes) bad("more workloads than nodes");
    if (!(synth_scale > 0.0)) bad("synth.scale must be positive");
    if (synth_burst_len < 1) bad("synth.burst_len must be at least 1");
    if (synth_hot_access_fraction < 0.0 || synth_hot_access_fraction > 1.0) {
        bad("synth.hot_access_fraction must be within [0,1]");
    }
    for (const auto& w : workloads) {
        if (w.kind == WorkloadSpec::Kind::Preset) {
            auto it = presets.find(w.value);
            if (it == presets.end()) bad("workload references unknown preset '" + w.value + "'");
            it->second.validate();
        }
    }
    if (fabric.prep_ps < 0 || fabric.nic_ps < 0 || fabric.prop_ps < 0 || fabric.switch_ps < 0) {
        bad("fabric delays must be non-negative");
    }
    if (fabric.link_rate_bps == 0) bad("fabric.link_rate_bps must be positive");
    if (fabric.request_bytes == 0 || fabric.response_bytes == 0) {
        bad("fabric packet sizes must be positive");
    }
    uint32_t max_pkt = std::max(fabric.request_bytes, fabric.response_bytes);
    if (fabric.voq_capacity_bytes < max_pkt) bad("fabric.voq_capacity_bytes below one packet");
    if (fabric.ingress_capacity_bytes < max_pkt) {
        bad("fabric.ingress_capacity_bytes below one packet");
    }
    if (dram.local_channels < 1 || dram.pool_channels < 1) {
        bad("dram channel counts must be at least 1");
    }
    if (dram.banks_per_channel < 1) bad("dram.banks must be at least 1");
    if (dram.queue_capacity < 1) bad("dram.queue_capacity must be at least 1");
    if (dram.t_access_ps <= 0) bad("dram.t_access_ps must be positive");
    for (const CacheLevelConfig* lvl : {&frontend.l1, &frontend.l2, &frontend.l3}) {
        uint64_t way_bytes = static_cast<uint64_t>(lvl->ways) * kCacheLineBytes;
        if (lvl->ways < 1) bad("cache ways must be at least 1");
        if (lvl->size_bytes < way_bytes || lvl->size_bytes % way_bytes != 0) {
            bad("cache size must be a positive multiple of ways * line size");
        }
    }
    if (frontend.tlb_ways < 1 || frontend.tlb_entries < frontend.tlb_ways ||
        frontend.tlb_entries % frontend.tlb_ways != 0) {
        bad("tlb entries must be a positive multiple of tlb ways");
    }
}

std::string RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    auto put = [&](const std::string& k, std::string v) { kv.emplace_back(k, std::move(v)); };
    auto put_u = [&](const std::string& k, uint64_t v) { put(k, std::to_string(v)); };
    auto put_d = [&](const std::string& k, double v) { put(k, format_double(v)); };

    put_u("nodes", nodes);
    put_u("pools", pools);
    put_u("local_bytes", local_bytes);
    put_u("pool_capacity_bytes", pool_capacity_bytes);
    put_u("chunk_bytes", chunk_bytes);
    put("page_policy", addrmap::page_policy_name(page_policy));
    put("pool_policy", gmm::pool_policy_name(pool_policy));
    put_u("seed", seed);
    put_u("epoch_cycles", epoch_cycles);
    put_u("cycle_ps", static_cast<uint64_t>(cycle_ps));
    {
        std::string w;
        for (const auto& spec : workloads) {
            if (!w.empty()) w += ",";
            w += (spec.kind == WorkloadSpec::Kind::Preset ? "preset:" : "trace:") + spec.value;
        }
        put("workloads", w);
    }
    put_d("synth.scale", synth_scale);
    put_u("synth.burst_len", synth_burst_len);
    put_d("synth.hot_access_fraction", synth_hot_access_fraction);
    put_u("fabric.prep_ps", static_cast<uint64_t>(fabric.prep_ps));
    put_u("fabric.nic_ps", static_cast<uint64_t>(fabric.nic_ps));
    put_u("fabric.prop_ps", static_cast<uint64_t>(fabric.prop_ps));
    put_u("fabric.switch_ps", static_cast<uint64_t>(fabric.switch_ps));
    put_u("fabric.link_rate_bps", fabric.link_rate_bps);
    put_u("fabric.request_bytes", fabric.request_bytes);
    put_u("fabric.response_bytes", fabric.response_bytes);
    put_u("fabric.voq_capacity_bytes", fabric.voq_capacity_bytes);
    put_u("fabric.ingress_capacity_bytes", fabric.ingress_capacity_bytes);
    put_u("dram.local_channels", dram.local_channels);
    put_u("dram.pool_channels", dram.pool_channels);
    put_u("dram.banks", dram.banks_per_channel);
    put_u("dram.queue_capacity", dram.queue_capacity);
    put_u("dram.t_access_ps", static_cast<uint64_t>(dram.t_access_ps));
    put_u("frontend.l1_bytes", frontend.l1.size_bytes);
    put_u("frontend.l1_ways", frontend.l1.ways);
    put_u("frontend.l1_latency", frontend.l1.latency_cycles);
    put_u("frontend.l2_bytes", frontend.l2.size_bytes);
    put_u("frontend.l2_ways", frontend.l2.ways);
    put_u("frontend.l2_latency", frontend.l2.latency_cycles);
    put_u("frontend.l3_bytes", frontend.l3.size_bytes);
    put_u("frontend.l3_ways", frontend.l3.ways);
    put_u("frontend.l3_latency", frontend.l3.latency_cycles);
    put_u("frontend.tlb_entries", frontend.tlb_entries);
    put_u("frontend.tlb_ways", frontend.tlb_ways);
    put_u("frontend.tlb_miss_cycles", frontend.tlb_miss_cycles);
    for (const auto& [label, p] : presets) {
        std::string base = "preset." + label + ".";
        put_u(base + "accesses", p.total_accesses);
        put_u(base + "footprint_bytes", p.footprint_bytes);
        put_d(base + "write_fraction", p.write_fraction);
        put_u(base + "mean_gap_cycles", p.mean_gap_cycles);
        put_d(base + "sequential_fraction", p.locality.sequential_fraction);
        put_d(base + "hot_set_fraction", p.locality.hot_set_fraction);
        put_d(base + "burstiness", p.locality.burstiness);
    }

    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

uint64_t RunConfig::echo_hash() const {
    std::string text = echo();
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace dmsim::config
