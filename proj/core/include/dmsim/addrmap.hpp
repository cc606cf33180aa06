#ifndef DMSIM_ADDRMAP_HPP
#define DMSIM_ADDRMAP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dmsim/gmm.hpp"
#include "dmsim/types.hpp"

namespace dmsim::addrmap {

enum class PagePolicy : uint8_t { LocalFirst, AlternateLocalRemote };

const char* page_policy_name(PagePolicy p);
std::optional<PagePolicy> page_policy_from_name(const std::string& name);

struct PageLocation {
    bool is_local = false;
    uint32_t local_frame = 0;      // local placement only
    PoolId pool_id = 0;            // remote placement only
    uint64_t pool_byte_offset = 0; // remote placement only, page aligned
};

// Per-node page table plus placement state: a bump allocator over the node's
// local frames and a cursor into the node's most recent chunk grant. Pages
// are never migrated or evicted, so a mapping is permanent once made.
class NodeAddressMap {
public:
    NodeAddressMap(NodeId node, uint64_t local_bytes, PagePolicy policy);

    // Looks up the page holding vaddr, establishing a mapping on first touch.
    // std::nullopt means the access is unmappable (no local frame and no pool
    // can grant a chunk); callers drop the access and count it.
    std::optional<PageLocation> resolve(uint64_t vaddr, gmm::Manager& gmm, SimTime now);

    // Page-table contents sorted by page index (debug dump).
    std::vector<std::pair<uint64_t, PageLocation>> snapshot() const;

    NodeId node_id() const { return node_; }
    uint64_t fault_count() const { return fault_count_; }
    uint64_t local_page_count() const { return local_pages_; }
    uint64_t remote_page_count() const { return remote_pages_; }
    uint64_t oom_drop_count() const { return oom_drops_; }
    uint64_t mapped_page_count() const { return table_.size(); }

private:
    std::optional<PageLocation> place_local();
    std::optional<PageLocation> place_remote(gmm::Manager& gmm, SimTime now);

    NodeId node_;
    PagePolicy policy_;
    uint64_t total_frames_;
    uint64_t next_frame_ = 0;
    std::unordered_map<uint64_t, PageLocation> table_; // page index -> placement

    std::optional<gmm::ChunkGrant> cur_chunk_;
    uint64_t cur_chunk_used_ = 0;

    uint64_t fault_count_ = 0;
    uint64_t local_pages_ = 0;
    uint64_t remote_pages_ = 0;
    uint64_t oom_drops_ = 0;
};

} // namespace dmsim::addrmap

#endif
