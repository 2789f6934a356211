#pragma once

#include "chorus/types.hpp"

#include <cstdint>
#include <queue>
#include <vector>

namespace chorus {

/// Global event queue: binary min-heap ordered by (fire_time, sequence).
/// The sequence counter increases with every push, so events with equal fire
/// times pop in FIFO order.
class EventQueue {
public:
    void push(Minutes fire_time, ActorId actor, ProcedureKind procedure) {
        heap_.push(ScheduledEvent{fire_time, std::move(actor), procedure, next_sequence_++});
    }

    ScheduledEvent pop() {
        ScheduledEvent ev = heap_.top();
        heap_.pop();
        return ev;
    }

    const ScheduledEvent& top() const { return heap_.top(); }

    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }

private:
    struct Later {
        bool operator()(const ScheduledEvent& a, const ScheduledEvent& b) const {
            if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<ScheduledEvent, std::vector<ScheduledEvent>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
};

} // namespace chorus
