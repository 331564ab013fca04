#include "fragsim/sip.hpp"

namespace fragsim {

void Sip::apply_update(ExchangeId exchange, const Quote& snapshot, Time t) {
    views_[slot(exchange)] = snapshot;

    NbboQuote next;
    next.time = t;
    for (std::size_t i = 0; i < exchange_order_.size(); ++i) {
        const Quote& view = views_[i];
        if (view.bid && (!next.bid || *view.bid > *next.bid)) {
            next.bid = view.bid;
            next.bid_exchange = exchange_order_[i];
        }
        if (view.ask && (!next.ask || *view.ask < *next.ask)) {
            next.ask = view.ask;
            next.ask_exchange = exchange_order_[i];
        }
    }
    nbbo_ = next;
    for (NbboListener* listener : subscribers_) listener->on_nbbo(nbbo_);
}

} // namespace fragsim
