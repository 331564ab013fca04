#pragma once
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

#include "fragsim/types.hpp"

namespace fragsim {

// Limit order book with price-time priority: per-price FIFO queues on each
// side plus an id -> order map. All orders are single-unit, so an incoming
// order matches at most one resting order.
class OrderBook {
public:
    // If the order crosses, returns the resting order it matched (removed
    // from the book); the match price is that order's limit price. Otherwise
    // the order rests at the back of its price level.
    std::optional<LimitOrder> submit(const LimitOrder& order);

    // Removes a resting order. Returns false (no-op) for unknown ids.
    bool withdraw(OrderId id);

    std::optional<Price> best_bid() const {
        if (bids_.empty()) return std::nullopt;
        return bids_.begin()->first;
    }
    std::optional<Price> best_ask() const {
        if (asks_.empty()) return std::nullopt;
        return asks_.begin()->first;
    }

    bool contains(OrderId id) const { return orders_.count(id) != 0; }
    std::size_t open_orders() const { return orders_.size(); }
    const LimitOrder* find(OrderId id) const {
        auto it = orders_.find(id);
        return it == orders_.end() ? nullptr : &it->second;
    }

private:
    using BidLevels = std::map<Price, std::deque<OrderId>, std::greater<Price>>;
    using AskLevels = std::map<Price, std::deque<OrderId>>;

    std::unordered_map<OrderId, LimitOrder> orders_;
    BidLevels bids_;  // begin() = highest bid
    AskLevels asks_;  // begin() = lowest ask
};

} // namespace fragsim
