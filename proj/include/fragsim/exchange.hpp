#pragma once
#include <functional>
#include <vector>

#include "fragsim/order_book.hpp"
#include "fragsim/types.hpp"

namespace fragsim {

class BboListener {
public:
    virtual ~BboListener() = default;
    virtual void on_bbo(const Quote& quote) = 0;
};

// Continuous double auction venue. An incoming order either trades against
// the oldest best-priced contra order (at the resting order's price) or
// rests. Exactly one BBO publication follows every book-changing request;
// trade receipts are delivered (via the trade handler) before it.
class Exchange {
public:
    explicit Exchange(ExchangeId id) : id_(id) {}

    ExchangeId id() const { return id_; }

    void subscribe(BboListener* listener) { subscribers_.push_back(listener); }
    void set_trade_handler(std::function<void(const Trade&)> handler) {
        trade_handler_ = std::move(handler);
    }
    // Optional book-event hooks, used by the order/trade trace.
    void set_order_hooks(std::function<void(const LimitOrder&, Time)> on_add,
                         std::function<void(OrderId, Time)> on_withdraw) {
        on_add_ = std::move(on_add);
        on_withdraw_ = std::move(on_withdraw);
    }

    enum class Outcome { Rested, Traded };

    Outcome submit_order(const LimitOrder& order, Time t);
    void withdraw_order(OrderId id, Time t);

    std::optional<Price> best_bid() const { return book_.best_bid(); }
    std::optional<Price> best_ask() const { return book_.best_ask(); }
    Quote current_quote(Time t) const { return Quote{book_.best_bid(), book_.best_ask(), id_, t}; }
    const OrderBook& book() const { return book_; }

private:
    void publish_bbo(Time t);

    ExchangeId id_;
    OrderBook book_;
    std::vector<BboListener*> subscribers_;
    std::function<void(const Trade&)> trade_handler_;
    std::function<void(const LimitOrder&, Time)> on_add_;
    std::function<void(OrderId, Time)> on_withdraw_;
};

} // namespace fragsim
