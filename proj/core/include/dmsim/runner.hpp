#ifndef DMSIM_RUNNER_HPP
#define DMSIM_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dmsim/config.hpp"
#include "dmsim/types.hpp"

namespace dmsim::runner {

struct RunOptions {
    bool dump_completions = false; // out_dir/completions.csv, one row per access
    bool packet_trace = false;     // out_dir/packet_trace.csv
    bool dump_page_tables = false; // out_dir/page_tables.csv
};

struct CellResult {
    std::string cell; // "<page_policy>-<pool_policy>"
    std::string out_dir;
    uint64_t injected = 0;
    uint64_t completed = 0;
    uint64_t oom_drops = 0;
    uint64_t remote_completed = 0;
    std::optional<double> mean_total_ns;
    std::optional<double> mean_remote_ns;
    double tail_ge_1000ns = 0.0;
    std::optional<double> mean_variation;
    uint64_t config_hash = 0;
    std::string summary_path;
};

// Benchmark labels (one per distinct workload spec) and the node -> label
// index map. Trace workloads are labeled by file basename.
std::pair<std::vector<std::string>, std::vector<uint32_t>> benchmark_map(
    const config::RunConfig& cfg);

// Synthesizes / loads every node's stream and merges them into one
// time-sorted trace. Trace-file workloads are retagged with the node that
// runs them. Fails (throws) before any simulation work if a file is missing.
std::vector<LlcMissRecord> build_trace(const config::RunConfig& cfg);

// One simulation cell: runs the engine on the given trace and writes the
// report (CSV series, summary.json, config echo, grant log) into cfg.out_dir.
CellResult run_cell_on_trace(const config::RunConfig& cfg, const RunOptions& opt,
                             const std::vector<LlcMissRecord>& trace,
                             const std::vector<std::string>& labels,
                             const std::vector<uint32_t>& node_bench);

// Convenience wrapper: builds the trace, then runs the single cell.
CellResult run_cell(const config::RunConfig& cfg, const RunOptions& opt);

// Policy-matrix sweep sharing one trace. Each cell lands in
// base.out_dir/<page>-<pool>/.
std::vector<CellResult> run_sweep(const config::RunConfig& base,
                                  const std::vector<addrmap::PagePolicy>& page_policies,
                                  const std::vector<gmm::PoolPolicy>& pool_policies,
                                  const RunOptions& opt);

void print_comparison(std::ostream& os, const std::vector<CellResult>& cells);

} // namespace dmsim::runner

#endif
