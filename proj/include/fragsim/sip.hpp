#pragma once
#include <vector>

#include "fragsim/event_queue.hpp"
#include "fragsim/exchange.hpp"
#include "fragsim/types.hpp"

namespace fragsim {

class NbboListener {
public:
    virtual ~NbboListener() = default;
    virtual void on_nbbo(const NbboQuote& quote) = 0;
};

// Market data consolidator. Keeps one (possibly delayed) BBO view per
// exchange and recomputes the NBBO whenever a view is replaced. With zero
// latency the update runs synchronously inside the exchange's publication;
// otherwise the snapshot is scheduled to apply at t + delay.
class Sip : public BboListener {
public:
    Sip(std::vector<ExchangeId> exchanges, Time delay, EventQueue* queue)
        : exchange_order_(std::move(exchanges)), delay_(delay), queue_(queue) {
        views_.resize(exchange_order_.size());
    }

    void subscribe(NbboListener* listener) { subscribers_.push_back(listener); }

    void on_bbo(const Quote& quote) override {
        if (delay_ == 0) {
            apply_update(quote.exchange, quote, quote.time);
        } else {
            Event ev;
            ev.kind = EventKind::NbboUpdate;
            ev.exchange = quote.exchange;
            ev.snapshot = quote;
            queue_->schedule(quote.time + delay_, ev);
        }
    }

    // Replaces the stored view for one exchange, recomputes the NBBO and
    // publishes it. Ties for best bid/ask go to the first exchange in the
    // configured order.
    void apply_update(ExchangeId exchange, const Quote& snapshot, Time t);

    const NbboQuote& current_nbbo() const { return nbbo_; }
    const Quote& view(ExchangeId exchange) const { return views_[slot(exchange)]; }
    Time delay() const { return delay_; }

private:
    std::size_t slot(ExchangeId id) const {
        for (std::size_t i = 0; i < exchange_order_.size(); ++i)
            if (exchange_order_[i] == id) return i;
        return 0;
    }

    std::vector<ExchangeId> exchange_order_;
    Time delay_;
    EventQueue* queue_;
    std::vector<Quote> views_;
    NbboQuote nbbo_;
    std::vector<NbboListener*> subscribers_;
};

} // namespace fragsim
