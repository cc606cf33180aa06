#ifndef DMSIM_FRONTEND_HPP
#define DMSIM_FRONTEND_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmsim/config.hpp"
#include "dmsim/types.hpp"

namespace dmsim::frontend {

inline constexpr std::string_view kRawHeader = "thread,vaddr,kind";

struct RawRef {
    ThreadId thread = 0;
    uint64_t vaddr = 0;
    AccessKind kind = AccessKind::Read;

    bool operator==(const RawRef&) const = default;
};

// Parses one `thread,vaddr_hex,kind` record. Throws ParseError.
RawRef parse_raw_line(std::string_view line, size_t line_no);
std::string format_raw_line(const RawRef& ref);

std::vector<RawRef> read_raw_file(const std::string& path);
void write_raw_file(const std::string& path, const std::vector<RawRef>& refs);

// One set-associative lookup structure with round-robin replacement. The
// victim cursor lives per set and advances only when a fill evicts; fills
// into an empty way leave it alone.
class SetAssocCache {
public:
    SetAssocCache(uint64_t num_sets, uint32_t ways);

    bool access(uint64_t key); // true on hit; a miss fills the key in

    uint64_t num_sets() const { return sets_; }
    uint32_t ways() const { return ways_; }

private:
    uint64_t sets_;
    uint32_t ways_;
    std::vector<uint64_t> tags_;   // sets x ways, 0 = empty (keys are offset by 1)
    std::vector<uint32_t> cursor_; // per-set round-robin victim pointer
};

// Functional three-level non-inclusive cache hierarchy plus a DTLB, shared
// by all threads of a node; per-thread cycle clocks. Latency charges are
// load-to-use totals per hit level: an L1 hit costs l1.latency, an L2 hit
// l1.latency + l2.latency, and anything that reaches L3 (hit or miss)
// l3.latency; a DTLB miss adds tlb_miss_cycles on top. Only demand misses
// that fall through L3 are emitted; write-backs carry no traffic here.
class Frontend {
public:
    Frontend(const config::FrontendConfig& cfg, NodeId node);

    // Feeds one reference. The owning thread's clock advances by the charge;
    // an LLC miss is returned stamped with the post-charge clock.
    std::optional<LlcMissRecord> access(const RawRef& ref);

    uint64_t thread_clock(ThreadId t) const;

    uint64_t l1_hits() const { return l1_hits_; }
    uint64_t l2_hits() const { return l2_hits_; }
    uint64_t l3_hits() const { return l3_hits_; }
    uint64_t llc_misses() const { return llc_misses_; }
    uint64_t tlb_misses() const { return tlb_misses_; }

private:
    config::FrontendConfig cfg_;
    NodeId node_;
    SetAssocCache l1_, l2_, l3_, tlb_;
    std::vector<uint64_t> clocks_; // grown on demand per thread id
    uint64_t l1_hits_ = 0, l2_hits_ = 0, l3_hits_ = 0, llc_misses_ = 0, tlb_misses_ = 0;
};

// Whole-file convenience: raw references in, LLC-miss trace out.
std::vector<LlcMissRecord> filter_trace(const std::vector<RawRef>& refs,
                                        const config::FrontendConfig& cfg, NodeId node);

} // namespace dmsim::frontend

#endif
