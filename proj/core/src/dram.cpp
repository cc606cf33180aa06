#include "dmsim/dram.hpp"

#include "dmsim/error.hpp"

namespace dmsim::dram {

DramChannel::DramChannel(uint32_t num_banks, uint32_t queue_capacity, SimTime t_access)
    : num_banks_(num_banks), queue_capacity_(queue_capacity), t_access_(t_access) {
    DMSIM_CHECK(num_banks_ > 0, "dram: need at least one bank");
    DMSIM_CHECK(queue_capacity_ > 0, "dram: need a positive queue capacity");
    DMSIM_CHECK(t_access_ > 0, "dram: t_access must be positive");
    bank_busy_until_.assign(num_banks_, 0);
}

void DramChannel::submit(EventQueue& eq, uint32_t bank, CompletionFn done) {
    DMSIM_CHECK(bank < num_banks_, "dram: bank index out of range");
    DMSIM_CHECK(can_accept(), "dram: submit to a full channel queue");
    queue_.push_back(Pending{bank, eq.now(), std::move(done)});
    try_start(eq);
}

void DramChannel::try_start(EventQueue& eq) {
    // Start as many head requests as the bank states allow. A blocked head
    // needs no timer: the completion that frees its bank re-enters here.
    while (!queue_.empty()) {
        Pending& head = queue_.front();
        if (bank_busy_until_[head.bank] > eq.now()) break;

        SimTime start = eq.now();
        bank_busy_until_[head.bank] = start + t_access_;
        in_service_ += 1;
        CompletionFn done = std::move(head.done);
        queue_.pop_front();

        eq.schedule(start + t_access_, [this, &eq, start, done = std::move(done)]() {
            in_service_ -= 1;
            served_ += 1;
            if (done) done(start, eq.now());
            try_start(eq);
            if (drain_hook_) drain_hook_();
        });
    }
}

MemoryDevice::MemoryDevice(uint32_t num_channels, uint32_t num_banks,
                           uint32_t queue_capacity, SimTime t_access) {
    DMSIM_CHECK(num_channels > 0, "dram: need at least one channel");
    channels_.reserve(num_channels);
    for (uint32_t i = 0; i < num_channels; ++i) {
        channels_.emplace_back(num_banks, queue_capacity, t_access);
    }
}

uint64_t MemoryDevice::served_count() const {
    uint64_t total = 0;
    for (const auto& c : channels_) total += c.served_count();
    return total;
}

} // namespace dmsim::dram
