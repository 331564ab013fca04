#pragma once
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "fragsim/types.hpp"

namespace fragsim {

enum class EventKind : std::uint8_t { ZiArrival, NbboUpdate };

// Scheduled occurrence: a ZI trader arrival or a delayed NBBO update carrying
// the BBO snapshot taken when the exchange published it.
struct Event {
    Time time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::ZiArrival;
    TraderId trader = -1;      // ZiArrival
    ExchangeId exchange = -1;  // NbboUpdate
    Quote snapshot;            // NbboUpdate
};

// Min-queue over (time, seq). seq is a per-queue insertion counter and the
// sole tiebreaker, so dispatch order is a strict total order.
class EventQueue {
public:
    void schedule(Time time, Event ev) {
        if (time < now_)
            throw std::logic_error("EventQueue::schedule: event time precedes current dispatch time");
        ev.time = time;
        ev.seq = next_seq_++;
        heap_.push(std::move(ev));
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    Time now() const { return now_; }

    // Pops the next event and advances the dispatch clock.
    Event pop() {
        Event ev = heap_.top();
        heap_.pop();
        now_ = ev.time;
        return ev;
    }

    const Event& peek() const { return heap_.top(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    Time now_ = 0;
};

// Dispatches events in (time, seq) order until the queue is exhausted or the
// next event lies past the horizon. Handler side effects (including further
// scheduling) complete before the next pop. Per-dispatch trace is optional.
inline void run_events(EventQueue& queue, const std::function<void(const Event&)>& handler,
                       Time horizon, const std::function<void(const Event&)>& trace = {}) {
    while (!queue.empty() && queue.peek().time <= horizon) {
        const Event ev = queue.pop();
        if (trace) trace(ev);
        handler(ev);
    }
}

} // namespace fragsim
