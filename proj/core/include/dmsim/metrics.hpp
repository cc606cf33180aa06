#ifndef DMSIM_METRICS_HPP
#define DMSIM_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmsim/types.hpp"

namespace dmsim::metrics {

// Remote end-to-end latency histogram, edges in nanoseconds:
// [0,200) [200,500) [500,1000) [1000,2000) [2000,inf)
inline constexpr int kNumBuckets = 5;
inline constexpr int64_t kBucketLowNs[kNumBuckets] = {0, 200, 500, 1000, 2000};
int bucket_of_ps(SimTime total_ps);

struct CompletionRecord {
    NodeId node_id = 0;
    uint32_t benchmark_id = 0; // index into the label table
    bool remote = false;
    SimTime total_ps = 0;
    // Components, exact in integer picoseconds; they sum to total_ps.
    // Local records put everything in local_ps; remote records use the rest.
    SimTime local_ps = 0;
    SimTime network_ps = 0;
    SimTime remote_queue_ps = 0;
    SimTime remote_service_ps = 0;
    SimTime completion_time = 0;
};

struct EpochAvgRow {
    uint64_t epoch_index = 0;
    SimTime epoch_end_ps = 0;
    uint32_t benchmark_id = 0;
    uint64_t count = 0;     // completions so far (cumulative)
    SimTime sum_total_ps = 0;
};

struct VariationRow {
    uint64_t epoch_index = 0;
    SimTime epoch_end_ps = 0;
    uint64_t variation = 0; // max - min per-pool request count in the epoch
};

struct BenchAgg {
    uint64_t count = 0;
    uint64_t remote_count = 0;
    SimTime sum_total_ps = 0;
    SimTime sum_local_ps = 0;
    SimTime sum_network_ps = 0;
    SimTime sum_remote_queue_ps = 0;
    SimTime sum_remote_service_ps = 0;
    SimTime sum_remote_total_ps = 0; // total_ps summed over remote records only
    uint64_t buckets[kNumBuckets] = {0, 0, 0, 0, 0};
};

// Streaming aggregation of completions: integer sums only, division happens
// at export. Epochs close as record timestamps pass their boundary, so both
// record streams must arrive in non-decreasing time order (the event queue
// guarantees that).
class Report {
public:
    Report(std::vector<std::string> benchmark_labels, uint32_t num_pools, SimTime epoch_ps);

    // A request reached its pool (counted for the per-epoch variation series
    // and the per-pool lifetime totals).
    void record_pool_request(PoolId pool, SimTime now);
    void record_completion(const CompletionRecord& rec);
    // Closes every epoch with a boundary at or before end_time, giving
    // ceil(end_time / epoch_ps) epochs in the series.
    void finalize(SimTime end_time);

    // Aggregate queries (ns means ps / 1000 as a double).
    uint64_t completion_count() const;
    uint64_t remote_completion_count() const;
    std::optional<double> mean_total_ns() const;
    std::optional<double> mean_remote_total_ns() const;
    std::optional<double> mean_network_ns() const;
    std::optional<double> mean_remote_queue_ns() const;
    std::optional<double> mean_remote_service_ns() const;
    // Fraction of remote completions at or above a bucket edge (500, 1000,
    // or 2000 ns; edges align with bucket boundaries so this is exact).
    double tail_fraction_at_ns(int64_t edge_ns) const;
    std::optional<double> mean_variation() const;

    const std::vector<BenchAgg>& per_benchmark() const { return bench_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<EpochAvgRow>& epoch_rows() const { return epoch_rows_; }
    const std::vector<VariationRow>& variation_rows() const { return variation_rows_; }
    const std::vector<uint64_t>& pool_request_totals() const { return pool_totals_; }
    uint64_t epochs_closed() const { return epochs_closed_; }
    SimTime epoch_ps() const { return epoch_ps_; }

private:
    void advance_to(SimTime t);
    void close_epoch();

    std::vector<std::string> labels_;
    std::vector<BenchAgg> bench_;
    SimTime epoch_ps_;
    uint64_t epochs_closed_ = 0;
    bool finalized_ = false;

    std::vector<uint64_t> pool_in_epoch_;
    std::vector<uint64_t> pool_totals_;
    std::vector<EpochAvgRow> epoch_rows_;
    std::vector<VariationRow> variation_rows_;
};

// Everything the JSON summary needs beyond the report itself.
struct ExportContext {
    std::string config_echo;
    uint64_t config_hash = 0;
    uint64_t seed = 0;
    std::string page_policy;
    std::string pool_policy;
    uint64_t injected = 0;
    uint64_t completed = 0;
    uint64_t oom_drops = 0;
    std::vector<uint64_t> pool_grant_counts;
    std::vector<uint64_t> pool_allocated_bytes;
    uint64_t denied_grants = 0;
    SimTime end_time_ps = 0;
};

// Writes epoch_avg.csv, histogram.csv, variation.csv, breakdown.csv into dir
// (which must exist). Throws RunError with the path on I/O failure.
void export_csv(const Report& report, const std::string& dir);

// Deterministic JSON summary text (schema_version 1); export_json writes it.
std::string json_summary(const Report& report, const ExportContext& ctx);
void export_json(const Report& report, const ExportContext& ctx, const std::string& path);

} // namespace dmsim::metrics

#endif
