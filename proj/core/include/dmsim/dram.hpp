#ifndef DMSIM_DRAM_HPP
#define DMSIM_DRAM_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "dmsim/event.hpp"
#include "dmsim/types.hpp"

namespace dmsim::dram {

inline constexpr SimTime kDefaultAccessPs = 46'000; // flat service time per access
inline constexpr uint32_t kDefaultQueueCapacity = 64;
inline constexpr uint32_t kDefaultBanksPerChannel = 8;

// Address interleave: channels stripe by page, banks stripe by line.
inline uint32_t channel_of(uint64_t addr, uint32_t num_channels) {
    return static_cast<uint32_t>((addr / kPageBytes) % num_channels);
}
inline uint32_t bank_of(uint64_t addr, uint32_t num_banks) {
    return static_cast<uint32_t>((addr / kCacheLineBytes) % num_banks);
}

// Called when an access finishes: service start time and completion time.
using CompletionFn = std::function<void(SimTime started, SimTime done)>;

// One memory channel: a FIFO request queue in front of independently busy
// banks. Only the head of the queue may start service, and it starts only
// when its bank is idle, so a busy bank blocks every request behind the head
// (head-of-line blocking is part of the model, not an accident). Service is
// a flat t_access per request; banks overlap freely across each other.
class DramChannel {
public:
    DramChannel(uint32_t num_banks, uint32_t queue_capacity, SimTime t_access);

    // Occupancy counts waiting requests only; a request leaves the queue the
    // moment its service starts.
    bool can_accept() const { return queue_.size() < queue_capacity_; }
    size_t queue_depth() const { return queue_.size(); }
    uint32_t in_service() const { return in_service_; }
    // Waiting plus in service, the L of L = lambda * W.
    size_t system_occupancy() const { return queue_.size() + in_service_; }

    // Caller must check can_accept() first; submitting to a full queue is a
    // modeling bug upstream (back-pressure must hold the request instead).
    void submit(EventQueue& eq, uint32_t bank, CompletionFn done);

    // Invoked after every completion has been processed (bank freed, head
    // re-examined). Back-pressured producers retry admission from here.
    void set_drain_hook(std::function<void()> hook) { drain_hook_ = std::move(hook); }

    uint64_t served_count() const { return served_; }
    SimTime t_access() const { return t_access_; }
    uint32_t num_banks() const { return num_banks_; }

private:
    struct Pending {
        uint32_t bank;
        SimTime enqueued;
        CompletionFn done;
    };

    void try_start(EventQueue& eq);

    uint32_t num_banks_;
    uint32_t queue_capacity_;
    SimTime t_access_;
    std::deque<Pending> queue_;
    std::vector<SimTime> bank_busy_until_;
    uint32_t in_service_ = 0;
    uint64_t served_ = 0;
    std::function<void()> drain_hook_;
};

// A memory device is a set of identical channels with page-granular channel
// interleave. Models both a node's local memory and a remote pool.
class MemoryDevice {
public:
    MemoryDevice(uint32_t num_channels, uint32_t num_banks, uint32_t queue_capacity,
                 SimTime t_access);

    uint32_t channel_index(uint64_t addr) const {
        return channel_of(addr, static_cast<uint32_t>(channels_.size()));
    }
    DramChannel& channel(uint32_t idx) { return channels_[idx]; }
    const DramChannel& channel(uint32_t idx) const { return channels_[idx]; }
    DramChannel& channel_for(uint64_t addr) { return channels_[channel_index(addr)]; }
    uint32_t num_channels() const { return static_cast<uint32_t>(channels_.size()); }

    uint64_t served_count() const;

private:
    std::vector<DramChannel> channels_;
};

} // namespace dmsim::dram

#endif
