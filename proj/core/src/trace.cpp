#include "dmsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>

#include <zlib.h>

#include "dmsim/error.hpp"
#include "dmsim/rng.hpp"

namespace dmsim::trace {

namespace {

[[noreturn]] void parse_fail(size_t line_no, const std::string& what) {
    throw ParseError("trace line " + std::to_string(line_no) + ": " + what);
}

std::string_view next_field(std::string_view& rest, bool& last) {
    size_t comma = rest.find(',');
    std::string_view field;
    if (comma == std::string_view::npos) {
        field = rest;
        rest = {};
        last = true;
    } else {
        field = rest.substr(0, comma);
        rest = rest.substr(comma + 1);
        last = false;
    }
    return field;
}

uint64_t parse_u64(std::string_view f, int base, size_t line_no, const char* name) {
    if (base == 16 && f.size() > 2 && f[0] == '0' && (f[1] == 'x' || f[1] == 'X'))
        f = f.substr(2);
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value, base);
    if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty())
        parse_fail(line_no, std::string("non-numeric ") + name + " field '" + std::string(f) + "'");
    return value;
}

} // namespace

LlcMissRecord parse_trace_line(std::string_view line, size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view rest = line;
    std::string_view fields[5];
    bool last = false;
    size_t n = 0;
    while (n < 5 && !last) fields[n++] = next_field(rest, last);
    if (n != 5 || !last)
        parse_fail(line_no, "expected 5 fields (timestamp,node,thread,vaddr,kind), got " +
                                std::to_string(last ? n : n + 1 + std::count(rest.begin(),
                                                                             rest.end(), ',')));

    LlcMissRecord rec;
    rec.timestamp = parse_u64(fields[0], 10, line_no, "timestamp");
    rec.node_id = static_cast<NodeId>(parse_u64(fields[1], 10, line_no, "node"));
    rec.thread_id = static_cast<ThreadId>(parse_u64(fields[2], 10, line_no, "thread"));
    rec.vaddr = parse_u64(fields[3], 16, line_no, "vaddr") & kLineMask;
    std::string_view kind = fields[4];
    if (kind == "R")
        rec.kind = AccessKind::Read;
    else if (kind == "W")
        rec.kind = AccessKind::Write;
    else
        parse_fail(line_no, "kind must be R or W, got '" + std::string(kind) + "'");
    return rec;
}

std::string format_trace_line(const LlcMissRecord& rec) {
    char buf[96];
    int len = std::snprintf(buf, sizeof buf, "%llu,%u,%u,0x%llx,%c",
                            static_cast<unsigned long long>(rec.timestamp), rec.node_id,
                            rec.thread_id, static_cast<unsigned long long>(rec.vaddr),
                            access_kind_char(rec.kind));
    return std::string(buf, static_cast<size_t>(len));
}

void WorkloadPreset::validate() const {
    if (footprint_bytes == 0)
        throw ConfigError("preset '" + label + "': footprint_bytes must be > 0");
    if (total_accesses == 0)
        throw ConfigError("preset '" + label + "': total_accesses must be > 0");
    auto ratio = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError("preset '" + label + "': " + name + " must be in [0,1]");
    };
    ratio(write_fraction, "write_fraction");
    ratio(locality.sequential_fraction, "sequential_fraction");
    ratio(locality.hot_set_fraction, "hot_set_fraction");
    ratio(locality.burstiness, "burstiness");
}

std::vector<LlcMissRecord> generate_synthetic(const WorkloadPreset& preset,
                                              const SynthParams& params, NodeId node_id,
                                              uint64_t seed) {
    preset.validate();
    if (params.scale <= 0.0) throw ConfigError("synthetic scale must be > 0");

    const uint64_t pages =
        std::max<uint64_t>(1, std::llround(static_cast<double>(preset.footprint_bytes) *
                                           params.scale / kPageBytes));
    const uint64_t count = std::max<uint64_t>(
        1, std::llround(static_cast<double>(preset.total_accesses) * params.scale));
    const uint64_t cover = std::min(pages, count);
    const uint64_t lines_per_page = kPageBytes / kCacheLineBytes;
    const uint64_t base = 0x100000000ULL;

    Rng rng = Rng::fork(seed, node_id);

    std::vector<LlcMissRecord> out;
    out.reserve(count);

    uint64_t touched = 0;    // pages [0, touched) have been first-touched
    uint64_t seq_line = 0;   // sequential cursor, in line units over touched pages
    uint64_t clock = 0;      // CPU cycles
    uint64_t burst_left = 0; // remaining records of the current burst episode

    const double hot_frac = preset.locality.hot_set_fraction;
    const uint64_t hot_target = std::max<uint64_t>(
        1, std::llround(hot_frac * static_cast<double>(pages)));

    auto hot_page = [&]() {
        // Hot set = the most recently first-touched window of pages.
        uint64_t h = std::min(hot_target, std::max<uint64_t>(touched, 1));
        uint64_t lo = touched > h ? touched - h : 0;
        return lo + rng.uniform_u64(h);
    };

    for (uint64_t i = 0; i < count; ++i) {
        uint64_t page;
        uint64_t line;
        bool cover_now = cover > 0 && ((i + 1) * cover / count) > (i * cover / count);
        if (cover_now && touched < pages) {
            page = touched++;
            line = rng.uniform_u64(lines_per_page);
        } else if (burst_left > 0) {
            page = hot_page();
            line = rng.uniform_u64(lines_per_page);
        } else if (rng.bernoulli(preset.locality.sequential_fraction)) {
            uint64_t total_lines = std::max<uint64_t>(touched, 1) * lines_per_page;
            seq_line = (seq_line + 1) % total_lines;
            page = seq_line / lines_per_page;
            line = seq_line % lines_per_page;
        } else if (rng.bernoulli(params.hot_access_fraction)) {
            page = hot_page();
            line = rng.uniform_u64(lines_per_page);
        } else {
            page = rng.uniform_u64(std::max<uint64_t>(touched, 1));
            line = rng.uniform_u64(lines_per_page);
        }

        LlcMissRecord rec;
        rec.timestamp = clock;
        rec.node_id = node_id;
        rec.thread_id = 0;
        rec.vaddr = base + page * kPageBytes + line * kCacheLineBytes;
        rec.kind = rng.bernoulli(preset.write_fraction) ? AccessKind::Write : AccessKind::Read;
        out.push_back(rec);

        if (burst_left > 0) {
            --burst_left;
            clock += 1; // back-to-back misses within a burst
        } else {
            clock += rng.geometric(static_cast<double>(preset.mean_gap_cycles));
            if (params.burst_len > 1 && rng.bernoulli(preset.locality.burstiness))
                burst_left = params.burst_len - 1;
        }
    }
    return out;
}

std::vector<LlcMissRecord> merge_streams(const std::vector<std::vector<LlcMissRecord>>& streams) {
    struct Cursor {
        size_t stream;
        size_t pos;
    };
    auto key_less = [&](const Cursor& a, const Cursor& b) {
        const LlcMissRecord& ra = streams[a.stream][a.pos];
        const LlcMissRecord& rb = streams[b.stream][b.pos];
        if (ra.timestamp != rb.timestamp) return ra.timestamp < rb.timestamp;
        if (ra.node_id != rb.node_id) return ra.node_id < rb.node_id;
        if (ra.thread_id != rb.thread_id) return ra.thread_id < rb.thread_id;
        return a.stream < b.stream;
    };
    auto heap_greater = [&](const Cursor& a, const Cursor& b) { return key_less(b, a); };

    size_t total = 0;
    for (size_t s = 0; s < streams.size(); ++s) {
        const auto& st = streams[s];
        for (size_t i = 1; i < st.size(); ++i)
            if (st[i].timestamp < st[i - 1].timestamp)
                throw RunError("merge_streams: input stream " + std::to_string(s) +
                               " is unsorted at position " + std::to_string(i));
        total += st.size();
    }

    std::priority_queue<Cursor, std::vector<Cursor>, decltype(heap_greater)> heap(heap_greater);
    for (size_t s = 0; s < streams.size(); ++s)
        if (!streams[s].empty()) heap.push(Cursor{s, 0});

    std::vector<LlcMissRecord> out;
    out.reserve(total);
    while (!heap.empty()) {
        Cursor c = heap.top();
        heap.pop();
        out.push_back(streams[c.stream][c.pos]);
        if (c.pos + 1 < streams[c.stream].size()) heap.push(Cursor{c.stream, c.pos + 1});
    }
    return out;
}

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Line source over either a plain or a gzip-compressed file.
class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path), gz_(has_gz_suffix(path)) {
        if (gz_) {
            gzf_ = gzopen(path.c_str(), "rb");
            if (!gzf_) throw RunError("cannot open trace file: " + path);
        } else {
            in_.open(path);
            if (!in_) throw RunError("cannot open trace file: " + path);
        }
    }
    ~LineReader() {
        if (gzf_) gzclose(gzf_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        if (!gz_) return static_cast<bool>(std::getline(in_, line));
        line.clear();
        char buf[4096];
        for (;;) {
            if (gzgets(gzf_, buf, sizeof buf) == nullptr) return !line.empty();
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                return true;
            }
        }
    }

private:
    std::string path_;
    bool gz_;
    gzFile gzf_ = nullptr;
    std::ifstream in_;
};

} // namespace

std::vector<LlcMissRecord> read_trace_file(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError("trace file is empty (missing header): " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader)
        throw ParseError("trace file " + path + ": bad header '" + line + "'");
    std::vector<LlcMissRecord> out;
    size_t line_no = 1;
    while (reader.next(line)) {
        ++line_no;
        if (line.empty()) continue;
        out.push_back(parse_trace_line(line, line_no));
    }
    return out;
}

void write_trace_file(const std::string& path, const std::vector<LlcMissRecord>& records) {
    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw RunError("cannot write trace file: " + path);
        gzprintf(f, "%s\n", std::string(kTraceHeader).c_str());
        for (const auto& rec : records) gzprintf(f, "%s\n", format_trace_line(rec).c_str());
        gzclose(f);
        return;
    }
    std::ofstream out(path);
    if (!out) throw RunError("cannot write trace file: " + path);
    out << kTraceHeader << '\n';
    for (const auto& rec : records) out << format_trace_line(rec) << '\n';
    if (!out) throw RunError("write failed: " + path);
}

} // namespace dmsim::trace
