// Command-line front end: run / sweep / gen-trace / filter-trace /
// validate-config. Exit codes: 0 ok, 1 run error, 2 config or usage error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmsim/config.hpp"
#include "dmsim/error.hpp"
#include "dmsim/frontend.hpp"
#include "dmsim/runner.hpp"
#include "dmsim/trace.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets; // raw key=value overrides
    std::string out_dir;
    std::string pool_policy;
    std::string page_policy;
    int64_t nodes = -1;
    int64_t pools = -1;
    int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config_path,
                    "config file (default: $DMSIM_CONFIG if set, else built-in defaults)");
    cmd->add_option("--set", o.sets, "override a config key, e.g. --set dram.banks=16")
        ->take_all();
    cmd->add_option("--out", o.out_dir, "output directory (config key out_dir)");
    cmd->add_option("--policy", o.pool_policy, "pool selection policy");
    cmd->add_option("--page-policy", o.page_policy, "page allocation policy");
    cmd->add_option("--nodes", o.nodes, "compute node count");
    cmd->add_option("--pools", o.pools, "memory pool count");
    cmd->add_option("--seed", o.seed, "run seed");
}

dmsim::config::RunConfig effective_config(const CommonOpts& o) {
    using namespace dmsim;
    config::RunConfig cfg;
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("DMSIM_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) cfg = config::load_config(path, /*validate=*/false);
    else cfg = config::default_config();

    for (const auto& kv : o.sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        config::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--set", 0);
    }
    if (o.nodes >= 0) config::apply_key(cfg, "nodes", std::to_string(o.nodes), "--nodes", 0);
    if (o.pools >= 0) config::apply_key(cfg, "pools", std::to_string(o.pools), "--pools", 0);
    if (o.seed >= 0) config::apply_key(cfg, "seed", std::to_string(o.seed), "--seed", 0);
    if (!o.pool_policy.empty()) {
        config::apply_key(cfg, "pool_policy", o.pool_policy, "--policy", 0);
    }
    if (!o.page_policy.empty()) {
        config::apply_key(cfg, "page_policy", o.page_policy, "--page-policy", 0);
    }
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    cfg.validate();
    return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace dmsim;

    CLI::App app{"trace-driven simulator of a rack with pooled remote memory"};
    app.require_subcommand(1);

    CommonOpts run_o;
    runner::RunOptions run_flags;
    auto* cmd_run = app.add_subcommand("run", "simulate one policy cell");
    add_common(cmd_run, run_o);
    cmd_run->add_flag("--dump-completions", run_flags.dump_completions,
                      "write one CSV row per completed access");
    cmd_run->add_flag("--packet-trace", run_flags.packet_trace,
                      "write per-packet stage timestamps");
    cmd_run->add_flag("--dump-page-tables", run_flags.dump_page_tables,
                      "write final page table contents");

    CommonOpts sweep_o;
    runner::RunOptions sweep_flags;
    std::string sweep_pages = "local_first,alternate";
    std::string sweep_pools = "random,round_robin,smart_idle";
    auto* cmd_sweep = app.add_subcommand("sweep", "run a policy matrix on one shared trace");
    add_common(cmd_sweep, sweep_o);
    cmd_sweep->add_option("--page-policies", sweep_pages, "comma list of page policies");
    cmd_sweep->add_option("--pool-policies", sweep_pools, "comma list of pool policies");

    CommonOpts gen_o;
    std::string gen_preset;
    std::string gen_out;
    int64_t gen_node = 0;
    auto* cmd_gen = app.add_subcommand("gen-trace", "write one node's synthetic stream");
    add_common(cmd_gen, gen_o);
    cmd_gen->add_option("--preset", gen_preset, "workload preset label")->required();
    cmd_gen->add_option("--trace-out", gen_out, "output trace path (.gz supported)")
        ->required();
    cmd_gen->add_option("--node", gen_node, "node id stamped on the records");

    CommonOpts filt_o;
    std::string filt_in;
    std::string filt_out;
    int64_t filt_node = 0;
    auto* cmd_filt = app.add_subcommand(
        "filter-trace", "run raw references through the cache filter, emit LLC misses");
    add_common(cmd_filt, filt_o);
    cmd_filt->add_option("--in", filt_in, "raw reference CSV (thread,vaddr,kind)")->required();
    cmd_filt->add_option("--trace-out", filt_out, "output trace path (.gz supported)")
        ->required();
    cmd_filt->add_option("--node", filt_node, "node id stamped on the records");

    CommonOpts val_o;
    auto* cmd_val = app.add_subcommand("validate-config", "parse, validate, and echo a config");
    add_common(cmd_val, val_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // anything but help/version is a usage error
    }

    try {
        if (cmd_run->parsed()) {
            auto cfg = effective_config(run_o);
            auto cell = runner::run_cell(cfg, run_flags);
            runner::print_comparison(std::cout, {cell});
            std::cout << "summary: " << cell.summary_path << "\n";
        } else if (cmd_sweep->parsed()) {
            auto cfg = effective_config(sweep_o);
            std::vector<addrmap::PagePolicy> pages;
            for (const auto& name : split_list(sweep_pages)) {
                auto p = addrmap::page_policy_from_name(name);
                if (!p) throw ConfigError("unknown page policy '" + name + "'");
                pages.push_back(*p);
            }
            std::vector<gmm::PoolPolicy> pools;
            for (const auto& name : split_list(sweep_pools)) {
                auto p = gmm::pool_policy_from_name(name);
                if (!p) throw ConfigError("unknown pool policy '" + name + "'");
                pools.push_back(*p);
            }
            if (pages.empty() || pools.empty()) {
                throw ConfigError("sweep needs at least one page and one pool policy");
            }
            auto cells = runner::run_sweep(cfg, pages, pools, sweep_flags);
            runner::print_comparison(std::cout, cells);
        } else if (cmd_gen->parsed()) {
            auto cfg = effective_config(gen_o);
            auto it = cfg.presets.find(gen_preset);
            if (it == cfg.presets.end()) {
                throw ConfigError("unknown preset '" + gen_preset + "'");
            }
            trace::SynthParams sp;
            sp.scale = cfg.synth_scale;
            sp.burst_len = cfg.synth_burst_len;
            sp.hot_access_fraction = cfg.synth_hot_access_fraction;
            auto records = trace::generate_synthetic(
                it->second, sp, static_cast<NodeId>(gen_node), cfg.seed);
            trace::write_trace_file(gen_out, records);
            std::cout << "wrote " << records.size() << " records to " << gen_out << "\n";
        } else if (cmd_filt->parsed()) {
            auto cfg = effective_config(filt_o);
            auto refs = frontend::read_raw_file(filt_in);
            auto records =
                frontend::filter_trace(refs, cfg.frontend, static_cast<NodeId>(filt_node));
            trace::write_trace_file(filt_out, records);
            std::cout << "filtered " << refs.size() << " references into " << records.size()
                      << " misses: " << filt_out << "\n";
        } else if (cmd_val->parsed()) {
            auto cfg = effective_config(val_o);
            std::cout << cfg.echo();
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
