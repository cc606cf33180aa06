#include "dmsim/metrics.hpp"

#include <algorithm>

#include "dmsim/error.hpp"

namespace dmsim::metrics {

int bucket_of_ps(SimTime total_ps) {
    DMSIM_CHECK(total_ps >= 0, "metrics: negative latency");
    for (int b = kNumBuckets - 1; b > 0; --b) {
        if (total_ps >= kBucketLowNs[b] * 1000) return b;
    }
    return 0;
}

Report::Report(std::vector<std::string> benchmark_labels, uint32_t num_pools,
               SimTime epoch_ps)
    : labels_(std::move(benchmark_labels)), epoch_ps_(epoch_ps) {
    DMSIM_CHECK(!labels_.empty(), "metrics: need at least one benchmark label");
    DMSIM_CHECK(epoch_ps_ > 0, "metrics: epoch length must be positive");
    bench_.resize(labels_.size());
    pool_in_epoch_.assign(num_pools, 0);
    pool_totals_.assign(num_pools, 0);
}

void Report::advance_to(SimTime t) {
    while (t >= static_cast<SimTime>(epochs_closed_ + 1) * epoch_ps_) close_epoch();
}

void Report::close_epoch() {
    SimTime end = static_cast<SimTime>(epochs_closed_ + 1) * epoch_ps_;
    for (uint32_t b = 0; b < bench_.size(); ++b) {
        if (bench_[b].count == 0) continue;
        epoch_rows_.push_back(EpochAvgRow{epochs_closed_, end, b, bench_[b].count,
                                          bench_[b].sum_total_ps});
    }
    uint64_t variation = 0;
    if (!pool_in_epoch_.empty()) {
        auto [mn, mx] = std::minmax_element(pool_in_epoch_.begin(), pool_in_epoch_.end());
        variation = *mx - *mn;
    }
    variation_rows_.push_back(VariationRow{epochs_closed_, end, variation});
    std::fill(pool_in_epoch_.begin(), pool_in_epoch_.end(), 0);
    epochs_closed_ += 1;
}

void Report::record_pool_request(PoolId pool, SimTime now) {
    DMSIM_CHECK(pool < pool_totals_.size(), "metrics: pool index out of range");
    DMSIM_CHECK(!finalized_, "metrics: record after finalize");
    advance_to(now);
    pool_in_epoch_[pool] += 1;
    pool_totals_[pool] += 1;
}

void Report::record_completion(const CompletionRecord& rec) {
    DMSIM_CHECK(!finalized_, "metrics: record after finalize");
    DMSIM_CHECK(rec.benchmark_id < bench_.size(), "metrics: benchmark id out of range");
    DMSIM_CHECK(rec.local_ps + rec.network_ps + rec.remote_queue_ps +
                        rec.remote_service_ps == rec.total_ps,
                "metrics: latency components do not sum to the total");
    if (rec.remote) {
        DMSIM_CHECK(rec.local_ps == 0, "metrics: remote record with local time");
    } else {
        DMSIM_CHECK(rec.network_ps == 0 && rec.remote_queue_ps == 0 &&
                        rec.remote_service_ps == 0,
                    "metrics: local record with remote components");
    }
    advance_to(rec.completion_time);

    BenchAgg& agg = bench_[rec.benchmark_id];
    agg.count += 1;
    agg.sum_total_ps += rec.total_ps;
    agg.sum_local_ps += rec.local_ps;
    agg.sum_network_ps += rec.network_ps;
    agg.sum_remote_queue_ps += rec.remote_queue_ps;
    agg.sum_remote_service_ps += rec.remote_service_ps;
    if (rec.remote) {
        agg.remote_count += 1;
        agg.sum_remote_total_ps += rec.total_ps;
        agg.buckets[bucket_of_ps(rec.total_ps)] += 1;
    }
}

void Report::finalize(SimTime end_time) {
    DMSIM_CHECK(!finalized_, "metrics: finalize called twice");
    while (static_cast<SimTime>(epochs_closed_) * epoch_ps_ < end_time) close_epoch();
    finalized_ = true;
}

uint64_t Report::completion_count() const {
    uint64_t n = 0;
    for (const auto& b : bench_) n += b.count;
    return n;
}

uint64_t Report::remote_completion_count() const {
    uint64_t n = 0;
    for (const auto& b : bench_) n += b.remote_count;
    return n;
}

namespace {

std::optional<double> ratio_ns(SimTime sum_ps, uint64_t count) {
    if (count == 0) return std::nullopt;
    return static_cast<double>(sum_ps) / 1000.0 / static_cast<double>(count);
}

} // namespace

std::optional<double> Report::mean_total_ns() const {
    SimTime s = 0;
    uint64_t n = 0;
    for (const auto& b : bench_) s += b.sum_total_ps, n += b.count;
    return ratio_ns(s, n);
}

std::optional<double> Report::mean_remote_total_ns() const {
    SimTime s = 0;
    uint64_t n = 0;
    for (const auto& b : bench_) s += b.sum_remote_total_ps, n += b.remote_count;
    return ratio_ns(s, n);
}

std::optional<double> Report::mean_network_ns() const {
    SimTime s = 0;
    uint64_t n = 0;
    for (const auto& b : bench_) s += b.sum_network_ps, n += b.remote_count;
    return ratio_ns(s, n);
}

std::optional<double> Report::mean_remote_queue_ns() const {
    SimTime s = 0;
    uint64_t n = 0;
    for (const auto& b : bench_) s += b.sum_remote_queue_ps, n += b.remote_count;
    return ratio_ns(s, n);
}

std::optional<double> Report::mean_remote_service_ns() const {
    SimTime s = 0;
    uint64_t n = 0;
    for (const auto& b : bench_) s += b.sum_remote_service_ps, n += b.remote_count;
    return ratio_ns(s, n);
}

double Report::tail_fraction_at_ns(int64_t edge_ns) const {
    int first = -1;
    for (int b = 0; b < kNumBuckets; ++b) {
        if (kBucketLowNs[b] == edge_ns) first = b;
    }
    DMSIM_CHECK(first > 0, "metrics: tail edge must match a bucket boundary");
    uint64_t above = 0, total = 0;
    for (const auto& agg : bench_) {
        total += agg.remote_count;
        for (int b = first; b < kNumBuckets; ++b) above += agg.buckets[b];
    }
    if (total == 0) return 0.0;
    return static_cast<double>(above) / static_cast<double>(total);
}

std::optional<double> Report::mean_variation() const {
    if (variation_rows_.empty()) return std::nullopt;
    uint64_t s = 0;
    for (const auto& row : variation_rows_) s += row.variation;
    return static_cast<double>(s) / static_cast<double>(variation_rows_.size());
}

} // namespace dmsim::metrics
