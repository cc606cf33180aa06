#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dmsim/error.hpp"
#include "dmsim/metrics.hpp"

namespace dmsim::metrics {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot open file for writing: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw RunError("write failed: " + path);
}

std::string ns_str(SimTime ps) { return format_double(static_cast<double>(ps) / 1000.0); }

std::string avg_ns_str(SimTime sum_ps, uint64_t count) {
    return format_double(static_cast<double>(sum_ps) / 1000.0 / static_cast<double>(count));
}

} // namespace

void export_csv(const Report& report, const std::string& dir) {
    {
        std::string path = dir + "/epoch_avg.csv";
        auto out = open_out(path);
        out << "epoch_index,sim_time_ns,benchmark,cumulative_avg_ns\n";
        for (const auto& row : report.epoch_rows()) {
            out << row.epoch_index << ',' << ns_str(row.epoch_end_ps) << ','
                << report.labels()[row.benchmark_id] << ','
                << avg_ns_str(row.sum_total_ps, row.count) << '\n';
        }
        finish(out, path);
    }
    {
        std::string path = dir + "/histogram.csv";
        auto out = open_out(path);
        out << "benchmark,bucket_index,lo_ns,hi_ns,count\n";
        for (uint32_t b = 0; b < report.labels().size(); ++b) {
            const BenchAgg& agg = report.per_benchmark()[b];
            for (int k = 0; k < kNumBuckets; ++k) {
                out << report.labels()[b] << ',' << k << ',' << kBucketLowNs[k] << ',';
                if (k + 1 < kNumBuckets) out << kBucketLowNs[k + 1];
                else out << "inf";
                out << ',' << agg.buckets[k] << '\n';
            }
        }
        finish(out, path);
    }
    {
        std::string path = dir + "/variation.csv";
        auto out = open_out(path);
        out << "epoch_index,sim_time_ns,variation\n";
        for (const auto& row : report.variation_rows()) {
            out << row.epoch_index << ',' << ns_str(row.epoch_end_ps) << ',' << row.variation
                << '\n';
        }
        finish(out, path);
    }
    {
        std::string path = dir + "/breakdown.csv";
        auto out = open_out(path);
        out << "benchmark,count,remote_count,avg_total_ns,avg_local_ns,avg_network_ns,"
               "avg_remote_queue_ns,avg_remote_service_ns,avg_remote_total_ns\n";
        for (uint32_t b = 0; b < report.labels().size(); ++b) {
            const BenchAgg& agg = report.per_benchmark()[b];
            if (agg.count == 0) continue;
            out << report.labels()[b] << ',' << agg.count << ',' << agg.remote_count << ','
                << avg_ns_str(agg.sum_total_ps, agg.count) << ','
                << avg_ns_str(agg.sum_local_ps, agg.count) << ','
                << avg_ns_str(agg.sum_network_ps, agg.count) << ','
                << avg_ns_str(agg.sum_remote_queue_ps, agg.count) << ','
                << avg_ns_str(agg.sum_remote_service_ps, agg.count) << ',';
            if (agg.remote_count > 0) out << avg_ns_str(agg.sum_remote_total_ps, agg.remote_count);
            out << '\n';
        }
        finish(out, path);
    }
}

std::string json_summary(const Report& report, const ExportContext& ctx) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = 1;
    {
        std::ostringstream hex;
        hex << "0x" << std::hex << ctx.config_hash;
        j["config_hash"] = hex.str();
    }
    j["seed"] = ctx.seed;
    j["page_policy"] = ctx.page_policy;
    j["pool_policy"] = ctx.pool_policy;
    j["end_time_ps"] = ctx.end_time_ps;
    j["epoch_ps"] = report.epoch_ps();
    j["epochs"] = report.epochs_closed();

    json totals;
    totals["injected"] = ctx.injected;
    totals["completed"] = ctx.completed;
    totals["oom_drops"] = ctx.oom_drops;
    totals["completed_remote"] = report.remote_completion_count();
    totals["completed_local"] = report.completion_count() - report.remote_completion_count();
    totals["pool_requests"] = report.pool_request_totals();
    totals["pool_grants"] = ctx.pool_grant_counts;
    totals["pool_allocated_bytes"] = ctx.pool_allocated_bytes;
    totals["denied_grants"] = ctx.denied_grants;
    j["totals"] = std::move(totals);

    json avgs;
    auto put_avg = [&](const char* key, std::optional<double> v) {
        if (v) avgs[key] = *v;
        else avgs[key] = nullptr;
    };
    put_avg("total_ns", report.mean_total_ns());
    put_avg("remote_total_ns", report.mean_remote_total_ns());
    put_avg("network_ns", report.mean_network_ns());
    put_avg("remote_queue_ns", report.mean_remote_queue_ns());
    put_avg("remote_service_ns", report.mean_remote_service_ns());
    j["averages_ns"] = std::move(avgs);

    json tails;
    tails["ge_500ns"] = report.tail_fraction_at_ns(500);
    tails["ge_1000ns"] = report.tail_fraction_at_ns(1000);
    tails["ge_2000ns"] = report.tail_fraction_at_ns(2000);
    j["tail_fraction"] = std::move(tails);

    {
        json hist;
        hist["edges_ns"] = std::vector<int64_t>(kBucketLowNs, kBucketLowNs + kNumBuckets);
        std::vector<uint64_t> total_counts(kNumBuckets, 0);
        json per_bench = json::object();
        for (uint32_t b = 0; b < report.labels().size(); ++b) {
            const BenchAgg& agg = report.per_benchmark()[b];
            std::vector<uint64_t> counts(agg.buckets, agg.buckets + kNumBuckets);
            for (int k = 0; k < kNumBuckets; ++k) total_counts[k] += counts[k];
            per_bench[report.labels()[b]] = counts;
        }
        hist["counts"] = total_counts;
        hist["per_benchmark"] = std::move(per_bench);
        j["histogram"] = std::move(hist);
    }

    {
        json var;
        if (auto mv = report.mean_variation()) var["mean"] = *mv;
        else var["mean"] = nullptr;
        std::vector<uint64_t> series;
        series.reserve(report.variation_rows().size());
        for (const auto& row : report.variation_rows()) series.push_back(row.variation);
        var["series"] = std::move(series);
        j["variation"] = std::move(var);
    }

    {
        json per_bench = json::object();
        for (uint32_t b = 0; b < report.labels().size(); ++b) {
            const BenchAgg& agg = report.per_benchmark()[b];
            json row;
            row["count"] = agg.count;
            row["remote_count"] = agg.remote_count;
            if (agg.count > 0) {
                row["avg_total_ns"] =
                    static_cast<double>(agg.sum_total_ps) / 1000.0 / agg.count;
            } else {
                row["avg_total_ns"] = nullptr;
            }
            if (agg.remote_count > 0) {
                row["avg_remote_total_ns"] =
                    static_cast<double>(agg.sum_remote_total_ps) / 1000.0 / agg.remote_count;
            } else {
                row["avg_remote_total_ns"] = nullptr;
            }
            per_bench[report.labels()[b]] = std::move(row);
        }
        j["per_benchmark"] = std::move(per_bench);
    }

    {
        std::vector<std::string> lines;
        std::istringstream is(ctx.config_echo);
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
        j["config"] = std::move(lines);
    }

    return j.dump(2) + "\n";
}

void export_json(const Report& report, const ExportContext& ctx, const std::string& path) {
    auto out = open_out(path);
    out << json_summary(report, ctx);
    finish(out, path);
}

} // namespace dmsim::metrics
