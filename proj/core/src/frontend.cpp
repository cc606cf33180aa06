#include "dmsim/frontend.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "dmsim/error.hpp"

namespace dmsim::frontend {

namespace {

[[noreturn]] void parse_fail(size_t line_no, const std::string& msg) {
    throw ParseError("raw reference line " + std::to_string(line_no) + ": " + msg);
}

std::string_view next_field(std::string_view& rest, size_t line_no) {
    if (rest.empty()) parse_fail(line_no, "missing field");
    size_t comma = rest.find(',');
    std::string_view f = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    return f;
}

} // namespace

RawRef parse_raw_line(std::string_view line, size_t line_no) {
    std::string_view rest = line;
    std::string_view f_thread = next_field(rest, line_no);
    std::string_view f_vaddr = next_field(rest, line_no);
    std::string_view f_kind = next_field(rest, line_no);
    if (!rest.empty()) parse_fail(line_no, "too many fields");

    RawRef ref;
    {
        auto [p, ec] = std::from_chars(f_thread.data(), f_thread.data() + f_thread.size(),
                                       ref.thread);
        if (ec != std::errc() || p != f_thread.data() + f_thread.size()) {
            parse_fail(line_no, "bad thread id '" + std::string(f_thread) + "'");
        }
    }
    {
        std::string_view v = f_vaddr;
        if (v.rfind("0x", 0) == 0 || v.rfind("0X", 0) == 0) v = v.substr(2);
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), ref.vaddr, 16);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
            parse_fail(line_no, "bad address '" + std::string(f_vaddr) + "'");
        }
    }
    if (f_kind == "R" || f_kind == "r") ref.kind = AccessKind::Read;
    else if (f_kind == "W" || f_kind == "w") ref.kind = AccessKind::Write;
    else parse_fail(line_no, "bad kind '" + std::string(f_kind) + "' (expected R or W)");
    return ref;
}

std::string format_raw_line(const RawRef& ref) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), ref.vaddr, 16);
    (void)ec;
    std::string out = std::to_string(ref.thread);
    out += ",0x";
    out.append(buf, p);
    out += ',';
    out += access_kind_char(ref.kind);
    return out;
}

std::vector<RawRef> read_raw_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RunError("cannot open raw reference file: " + path);
    std::string line;
    size_t line_no = 0;
    std::vector<RawRef> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != kRawHeader) {
                throw ParseError(path + ": expected header '" + std::string(kRawHeader) +
                                 "', got '" + line + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        out.push_back(parse_raw_line(line, line_no));
    }
    return out;
}

void write_raw_file(const std::string& path, const std::vector<RawRef>& refs) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot open file for writing: " + path);
    out << kRawHeader << "\n";
    for (const auto& r : refs) out << format_raw_line(r) << "\n";
    if (!out) throw RunError("write failed: " + path);
}

SetAssocCache::SetAssocCache(uint64_t num_sets, uint32_t ways) : sets_(num_sets), ways_(ways) {
    DMSIM_CHECK(sets_ > 0 && ways_ > 0, "cache: sets and ways must be positive");
    tags_.assign(sets_ * ways_, 0);
    cursor_.assign(sets_, 0);
}

bool SetAssocCache::access(uint64_t key) {
    uint64_t stored = key + 1; // reserve 0 for "empty"
    uint64_t set = key % sets_;
    uint64_t* row = &tags_[set * ways_];
    for (uint32_t w = 0; w < ways_; ++w) {
        if (row[w] == stored) return true;
    }
    for (uint32_t w = 0; w < ways_; ++w) {
        if (row[w] == 0) {
            row[w] = stored;
            return false;
        }
    }
    row[cursor_[set]] = stored;
    cursor_[set] = (cursor_[set] + 1) % ways_;
    return false;
}

namespace {

uint64_t sets_of(const config::CacheLevelConfig& lvl) {
    return lvl.size_bytes / (static_cast<uint64_t>(lvl.ways) * kCacheLineBytes);
}

} // namespace

Frontend::Frontend(const config::FrontendConfig& cfg, NodeId node)
    : cfg_(cfg),
      node_(node),
      l1_(sets_of(cfg.l1), cfg.l1.ways),
      l2_(sets_of(cfg.l2), cfg.l2.ways),
      l3_(sets_of(cfg.l3), cfg.l3.ways),
      tlb_(cfg.tlb_entries / cfg.tlb_ways, cfg.tlb_ways) {}

uint64_t Frontend::thread_clock(ThreadId t) const {
    return t < clocks_.size() ? clocks_[t] : 0;
}

std::optional<LlcMissRecord> Frontend::access(const RawRef& ref) {
    if (ref.thread >= clocks_.size()) clocks_.resize(ref.thread + 1, 0);

    uint64_t charge = 0;
    if (!tlb_.access(page_of(ref.vaddr))) {
        tlb_misses_ += 1;
        charge += cfg_.tlb_miss_cycles;
    }

    uint64_t line = ref.vaddr / kCacheLineBytes;
    bool missed_all = false;
    if (l1_.access(line)) {
        l1_hits_ += 1;
        charge += cfg_.l1.latency_cycles;
    } else if (l2_.access(line)) {
        l2_hits_ += 1;
        charge += cfg_.l1.latency_cycles + cfg_.l2.latency_cycles;
    } else if (l3_.access(line)) {
        l3_hits_ += 1;
        charge += cfg_.l3.latency_cycles;
    } else {
        llc_misses_ += 1;
        charge += cfg_.l3.latency_cycles;
        missed_all = true;
    }

    clocks_[ref.thread] += charge;
    if (!missed_all) return std::nullopt;
    LlcMissRecord rec;
    rec.timestamp = clocks_[ref.thread];
    rec.node_id = node_;
    rec.thread_id = ref.thread;
    rec.vaddr = ref.vaddr & kLineMask;
    rec.kind = ref.kind;
    return rec;
}

std::vector<LlcMissRecord> filter_trace(const std::vector<RawRef>& refs,
                                        const config::FrontendConfig& cfg, NodeId node) {
    Frontend fe(cfg, node);
    std::vector<LlcMissRecord> out;
    for (const auto& r : refs) {
        if (auto miss = fe.access(r)) out.push_back(*miss);
    }
    // Per-thread clocks interleave, so the combined stream needs a time sort;
    // stable keeps reference order among equal stamps.
    std::stable_sort(out.begin(), out.end(), [](const LlcMissRecord& a, const LlcMissRecord& b) {
        return a.timestamp < b.timestamp;
    });
    return out;
}

} // namespace dmsim::frontend
