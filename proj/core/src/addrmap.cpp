#include "dmsim/addrmap.hpp"

#include <algorithm>

#include "dmsim/error.hpp"

namespace dmsim::addrmap {

const char* page_policy_name(PagePolicy p) {
    switch (p) {
        case PagePolicy::LocalFirst: return "local_first";
        case PagePolicy::AlternateLocalRemote: return "alternate";
    }
    return "?";
}

std::optional<PagePolicy> page_policy_from_name(const std::string& name) {
    if (name == "local_first") return PagePolicy::LocalFirst;
    if (name == "alternate") return PagePolicy::AlternateLocalRemote;
    return std::nullopt;
}

NodeAddressMap::NodeAddressMap(NodeId node, uint64_t local_bytes, PagePolicy policy)
    : node_(node), policy_(policy), total_frames_(local_bytes / kPageBytes) {}

std::vector<std::pair<uint64_t, PageLocation>> NodeAddressMap::snapshot() const {
    std::vector<std::pair<uint64_t, PageLocation>> out(table_.begin(), table_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::optional<PageLocation> NodeAddressMap::place_local() {
    if (next_frame_ >= total_frames_) return std::nullopt;
    PageLocation loc;
    loc.is_local = true;
    loc.local_frame = static_cast<uint32_t>(next_frame_++);
    local_pages_ += 1;
    return loc;
}

std::optional<PageLocation> NodeAddressMap::place_remote(gmm::Manager& gmm, SimTime now) {
    if (!cur_chunk_ || cur_chunk_used_ + kPageBytes > cur_chunk_->size) {
        auto grant = gmm.allocate_chunk(node_, now);
        if (!grant) return std::nullopt;
        cur_chunk_ = *grant;
        cur_chunk_used_ = 0;
    }
    PageLocation loc;
    loc.is_local = false;
    loc.pool_id = cur_chunk_->pool_id;
    loc.pool_byte_offset = cur_chunk_->base_offset + cur_chunk_used_;
    cur_chunk_used_ += kPageBytes;
    remote_pages_ += 1;
    return loc;
}

std::optional<PageLocation> NodeAddressMap::resolve(uint64_t vaddr, gmm::Manager& gmm,
                                                    SimTime now) {
    uint64_t page = page_of(vaddr);
    auto it = table_.find(page);
    if (it != table_.end()) return it->second;

    // First touch: the fault counter advances even if placement ends up
    // denied, so alternation stays tied to fault arrival order.
    uint64_t fault_index = fault_count_++;

    std::optional<PageLocation> loc;
    switch (policy_) {
        case PagePolicy::LocalFirst:
            loc = place_local();
            if (!loc) loc = place_remote(gmm, now);
            break;
        case PagePolicy::AlternateLocalRemote:
            // Even faults go local, odd faults remote, while local frames
            // remain; once they run out everything goes remote.
            if (next_frame_ < total_frames_ && (fault_index % 2) == 0) {
                loc = place_local();
            } else {
                loc = place_remote(gmm, now);
                if (!loc) loc = place_local();
            }
            break;
    }
    if (!loc) {
        oom_drops_ += 1;
        return std::nullopt;
    }
    table_.emplace(page, *loc);
    return loc;
}

} // namespace dmsim::addrmap
