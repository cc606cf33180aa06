#include "dmsim/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>

#include "dmsim/engine.hpp"
#include "dmsim/error.hpp"
#include "dmsim/trace.hpp"

namespace dmsim::runner {

namespace {

std::string spec_label(const config::WorkloadSpec& spec) {
    if (spec.kind == config::WorkloadSpec::Kind::Preset) return spec.value;
    return std::filesystem::path(spec.value).filename().string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot open file for writing: " + path);
    return out;
}

} // namespace

std::pair<std::vector<std::string>, std::vector<uint32_t>> benchmark_map(
    const config::RunConfig& cfg) {
    std::vector<std::string> labels;
    std::vector<uint32_t> group_bench(cfg.workloads.size());
    std::map<std::string, uint32_t> seen; // spec string -> label index
    for (uint32_t g = 0; g < cfg.workloads.size(); ++g) {
        const auto& spec = cfg.workloads[g];
        std::string key =
            (spec.kind == config::WorkloadSpec::Kind::Preset ? "p:" : "t:") + spec.value;
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, static_cast<uint32_t>(labels.size())).first;
            labels.push_back(spec_label(spec));
        }
        group_bench[g] = it->second;
    }
    std::vector<uint32_t> node_bench(cfg.nodes);
    for (uint32_t n = 0; n < cfg.nodes; ++n) {
        node_bench[n] = group_bench[cfg.workload_group_of(n)];
    }
    return {std::move(labels), std::move(node_bench)};
}

std::vector<LlcMissRecord> build_trace(const config::RunConfig& cfg) {
    std::vector<std::vector<LlcMissRecord>> streams;
    streams.reserve(cfg.nodes);
    trace::SynthParams sp;
    sp.scale = cfg.synth_scale;
    sp.burst_len = cfg.synth_burst_len;
    sp.hot_access_fraction = cfg.synth_hot_access_fraction;
    for (uint32_t n = 0; n < cfg.nodes; ++n) {
        const auto& spec = cfg.workload_of(n);
        if (spec.kind == config::WorkloadSpec::Kind::Preset) {
            const auto& preset = cfg.presets.at(spec.value);
            streams.push_back(trace::generate_synthetic(preset, sp, n, cfg.seed));
        } else {
            auto records = trace::read_trace_file(spec.value);
            for (auto& r : records) r.node_id = n; // the stream belongs to this node now
            streams.push_back(std::move(records));
        }
    }
    return trace::merge_streams(streams);
}

CellResult run_cell_on_trace(const config::RunConfig& cfg, const RunOptions& opt,
                             const std::vector<LlcMissRecord>& trace,
                             const std::vector<std::string>& labels,
                             const std::vector<uint32_t>& node_bench) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    engine::Engine eng(cfg, node_bench, labels);

    std::ofstream completions_out;
    if (opt.dump_completions) {
        completions_out = open_out(cfg.out_dir + "/completions.csv");
        completions_out << "node,benchmark,placement,total_ps,local_ps,network_ps,"
                           "remote_queue_ps,remote_service_ps,completion_ps\n";
        eng.set_completion_sink([&, labels](const metrics::CompletionRecord& rec) {
            completions_out << rec.node_id << ',' << labels[rec.benchmark_id] << ','
                            << (rec.remote ? "remote" : "local") << ',' << rec.total_ps << ','
                            << rec.local_ps << ',' << rec.network_ps << ','
                            << rec.remote_queue_ps << ',' << rec.remote_service_ps << ','
                            << rec.completion_time << '\n';
        });
    }
    if (opt.packet_trace) eng.fabric().enable_stage_trace();

    eng.run(trace);

    // Config echo: the exact effective key set, reloadable as-is.
    {
        auto out = open_out(cfg.out_dir + "/config_echo.cfg");
        out << cfg.echo();
    }
    metrics::export_csv(eng.report(), cfg.out_dir);
    {
        auto out = open_out(cfg.out_dir + "/grants.csv");
        out << "grant_index,policy,pool,node,sim_time\n";
        for (const auto& g : eng.gmm().grant_log()) {
            out << g.grant_index << ',' << gmm::pool_policy_name(g.policy) << ',' << g.pool_id
                << ',' << g.node_id << ',' << g.sim_time << '\n';
        }
    }
    if (opt.dump_page_tables) {
        auto out = open_out(cfg.out_dir + "/page_tables.csv");
        out << "node,page_hex,placement,local_frame,pool,pool_offset\n";
        for (uint32_t n = 0; n < cfg.nodes; ++n) {
            for (const auto& [page, loc] : eng.node_map(n).snapshot()) {
                out << n << ",0x" << std::hex << page << std::dec << ','
                    << (loc.is_local ? "local" : "remote") << ',';
                if (loc.is_local) out << loc.local_frame << ",,";
                else out << ',' << loc.pool_id << ',' << loc.pool_byte_offset;
                out << '\n';
            }
        }
    }
    if (opt.packet_trace) {
        auto out = open_out(cfg.out_dir + "/packet_trace.csv");
        out << "pkt_id,kind,injected,nic_out,switch_in,switch_out,delivered\n";
        for (const auto& row : eng.fabric().stage_trace()) {
            out << row.pkt_id << ','
                << (row.kind == fabric::PacketKind::Request ? "request" : "response") << ','
                << row.injected << ',' << row.nic_out << ',' << row.switch_in << ','
                << row.switch_out << ',' << row.delivered << '\n';
        }
    }

    metrics::ExportContext ctx;
    ctx.config_echo = cfg.echo();
    ctx.config_hash = cfg.echo_hash();
    ctx.seed = cfg.seed;
    ctx.page_policy = addrmap::page_policy_name(cfg.page_policy);
    ctx.pool_policy = gmm::pool_policy_name(cfg.pool_policy);
    ctx.injected = eng.injected_count();
    ctx.completed = eng.completed_count();
    ctx.oom_drops = eng.oom_drop_count();
    ctx.denied_grants = eng.gmm().denied_count();
    ctx.end_time_ps = eng.end_time();
    for (const auto& pool : eng.gmm().pools()) {
        ctx.pool_allocated_bytes.push_back(pool.allocated_bytes);
    }
    ctx.pool_grant_counts.assign(cfg.pools, 0);
    for (const auto& g : eng.gmm().grant_log()) ctx.pool_grant_counts[g.pool_id] += 1;

    std::string summary_path = cfg.out_dir + "/summary.json";
    metrics::export_json(eng.report(), ctx, summary_path);

    CellResult res;
    res.cell = std::string(addrmap::page_policy_name(cfg.page_policy)) + "-" +
               gmm::pool_policy_name(cfg.pool_policy);
    res.out_dir = cfg.out_dir;
    res.injected = eng.injected_count();
    res.completed = eng.completed_count();
    res.oom_drops = eng.oom_drop_count();
    res.remote_completed = eng.report().remote_completion_count();
    res.mean_total_ns = eng.report().mean_total_ns();
    res.mean_remote_ns = eng.report().mean_remote_total_ns();
    res.tail_ge_1000ns = eng.report().tail_fraction_at_ns(1000);
    res.mean_variation = eng.report().mean_variation();
    res.config_hash = cfg.echo_hash();
    res.summary_path = summary_path;
    return res;
}

CellResult run_cell(const config::RunConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    auto [labels, node_bench] = benchmark_map(cfg);
    auto trace = build_trace(cfg);
    return run_cell_on_trace(cfg, opt, trace, labels, node_bench);
}

std::vector<CellResult> run_sweep(const config::RunConfig& base,
                                  const std::vector<addrmap::PagePolicy>& page_policies,
                                  const std::vector<gmm::PoolPolicy>& pool_policies,
                                  const RunOptions& opt) {
    base.validate();
    auto [labels, node_bench] = benchmark_map(base);
    auto trace = build_trace(base); // cells share the workload; only policies move
    std::vector<CellResult> cells;
    for (auto page : page_policies) {
        for (auto pool : pool_policies) {
            config::RunConfig cfg = base;
            cfg.page_policy = page;
            cfg.pool_policy = pool;
            cfg.out_dir = base.out_dir + "/" + addrmap::page_policy_name(page) + "-" +
                          gmm::pool_policy_name(pool);
            cells.push_back(run_cell_on_trace(cfg, opt, trace, labels, node_bench));
        }
    }
    return cells;
}

void print_comparison(std::ostream& os, const std::vector<CellResult>& cells) {
    // Display rounding only; the files carry full precision.
    auto fix3 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", v);
        return std::string(buf);
    };
    auto fmt = [&](std::optional<double> v) { return v ? fix3(*v) : std::string("-"); };
    os << std::left << std::setw(28) << "cell" << std::right << std::setw(14) << "avg_ns"
       << std::setw(16) << "remote_avg_ns" << std::setw(16) << "tail_ge_1000ns"
       << std::setw(16) << "mean_variation" << '\n';
    for (const auto& c : cells) {
        os << std::left << std::setw(28) << c.cell << std::right << std::setw(14)
           << fmt(c.mean_total_ns) << std::setw(16) << fmt(c.mean_remote_ns) << std::setw(16)
           << fix3(c.tail_ge_1000ns) << std::setw(16) << fmt(c.mean_variation) << '\n';
    }
}

} // namespace dmsim::runner
