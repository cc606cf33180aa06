#ifndef DMSIM_EVENT_HPP
#define DMSIM_EVENT_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "dmsim/error.hpp"
#include "dmsim/types.hpp"

namespace dmsim {

// Deterministic discrete-event core. Events are processed in non-decreasing
// (time, sequence) order; the sequence number breaks ties by insertion order,
// which makes every run a pure function of its inputs.
class EventQueue {
public:
    using Action = std::function<void()>;

    SimTime now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    size_t size() const { return heap_.size(); }

    void schedule(SimTime time, Action action) {
        DMSIM_CHECK(time >= now_, "event scheduled in the past (causality violation), t=" +
                                      std::to_string(time) + " now=" + std::to_string(now_));
        heap_.push(Event{time, next_seq_++, std::move(action)});
    }

    // Pops the minimum (time, seq) event, advances the clock, dispatches.
    void step() {
        DMSIM_CHECK(!heap_.empty(), "step() on an empty event queue");
        // std::priority_queue::top is const; the action is moved out via the
        // mutable member before pop.
        const Event& top = heap_.top();
        DMSIM_CHECK(top.time >= now_, "event time went backwards");
        now_ = top.time;
        Action action = std::move(top.action);
        heap_.pop();
        action();
    }

    void run() {
        while (!heap_.empty()) step();
    }

private:
    struct Event {
        SimTime time;
        uint64_t seq;
        mutable Action action;
        bool operator>(const Event& o) const {
            return time != o.time ? time > o.time : seq > o.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, std::greater<>> heap_;
    SimTime now_ = 0;
    uint64_t next_seq_ = 0;
};

} // namespace dmsim

#endif
