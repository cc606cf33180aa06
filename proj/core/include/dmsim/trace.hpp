#ifndef DMSIM_TRACE_HPP
#define DMSIM_TRACE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dmsim/types.hpp"

namespace dmsim::trace {

inline constexpr std::string_view kTraceHeader = "timestamp,node,thread,vaddr,kind";

// Parses one CSV record `timestamp,node,thread,vaddr_hex,kind`. The address
// is masked to 64B line granularity. line_no is 1-based and only used for
// error messages. Throws ParseError.
LlcMissRecord parse_trace_line(std::string_view line, size_t line_no);

std::string format_trace_line(const LlcMissRecord& rec);

struct LocalityProfile {
    double sequential_fraction = 0.3;
    double hot_set_fraction = 0.2;
    double burstiness = 0.1; // fraction of episodes that are burst clusters
};

struct WorkloadPreset {
    std::string label;
    uint64_t footprint_bytes = 0;
    uint64_t total_accesses = 0;
    double write_fraction = 0.3;
    LocalityProfile locality;
    // Mean inter-episode gap in CPU cycles; workload intensity knob.
    uint64_t mean_gap_cycles = 200;

    void validate() const; // throws ConfigError on bad ratios/zero sizes
};

struct SynthParams {
    double scale = 1.0;              // applied to both footprint and access count
    uint64_t burst_len = 64;         // K back-to-back misses per burst episode
    double hot_access_fraction = 0.9; // share of non-sequential singles aimed at the hot set
};

// Deterministic synthetic LLC-miss stream for one node. Pure function of
// (preset, params, node_id, seed): the distinct pages touched span the scaled
// footprint (+-1 page) and the record count equals the scaled access count.
// First touches are spread across the run so the footprint grows over time;
// the hot set is the most recently touched window of pages; burst episodes
// hammer the hot set back-to-back.
std::vector<LlcMissRecord> generate_synthetic(const WorkloadPreset& preset,
                                              const SynthParams& params, NodeId node_id,
                                              uint64_t seed);

// k-way merge of individually time-ordered streams into one globally
// non-decreasing stream. Ties break by (node_id, thread_id, input order).
// Throws RunError naming the offending stream and position if an input is
// unsorted.
std::vector<LlcMissRecord> merge_streams(const std::vector<std::vector<LlcMissRecord>>& streams);

// Trace file I/O. A ".gz" suffix selects gzip transparently on both sides.
std::vector<LlcMissRecord> read_trace_file(const std::string& path);
void write_trace_file(const std::string& path, const std::vector<LlcMissRecord>& records);

} // namespace dmsim::trace

#endif
