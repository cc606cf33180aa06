#ifndef DMSIM_TYPES_HPP
#define DMSIM_TYPES_HPP

#include <charconv>
#include <cstdint>
#include <string>

namespace dmsim {

// Simulated time in integer picoseconds. All configured delays are exact in
// ps, so there is no floating-point drift anywhere on the timing path.
using SimTime = int64_t;

using NodeId = uint32_t;
using PoolId = uint32_t;
using ThreadId = uint32_t;

inline constexpr uint64_t kCacheLineBytes = 64;
inline constexpr uint64_t kPageBytes = 4096;
inline constexpr uint64_t kLineMask = ~(kCacheLineBytes - 1);

// One 1.2GHz CPU cycle, rounded down to whole picoseconds. Trace timestamps
// are cycles; everything downstream runs on the picosecond clock.
inline constexpr SimTime kCyclePs = 833;

enum class AccessKind : uint8_t { Read, Write };

inline char access_kind_char(AccessKind k) { return k == AccessKind::Read ? 'R' : 'W'; }

// One timestamped last-level-cache miss. Timestamps are CPU cycles; within a
// (node, thread) stream they are non-decreasing. vaddr is line-aligned.
struct LlcMissRecord {
    uint64_t timestamp = 0;
    NodeId node_id = 0;
    ThreadId thread_id = 0;
    uint64_t vaddr = 0;
    AccessKind kind = AccessKind::Read;

    bool operator==(const LlcMissRecord&) const = default;
};

inline uint64_t page_of(uint64_t vaddr) { return vaddr / kPageBytes; }
inline uint64_t page_offset_of(uint64_t vaddr) { return vaddr % kPageBytes; }

// ceil(a / b) for positive integers
inline uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

// Shortest round-trip decimal form; deterministic, no locale involvement.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

// smallest m with 2^m >= n; 0 for n <= 1
inline uint32_t ceil_log2(uint64_t n) {
    uint32_t m = 0;
    uint64_t v = 1;
    while (v < n) {
        v <<= 1;
        ++m;
    }
    return m;
}

} // namespace dmsim

#endif
