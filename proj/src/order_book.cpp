#include "fragsim/order_book.hpp"

#include <cassert>
#include <stdexcept>

namespace fragsim {

namespace {

template <typename Levels>
LimitOrder pop_front_of_best(Levels& levels, std::unordered_map<OrderId, LimitOrder>& orders) {
    auto level = levels.begin();
    const OrderId id = level->second.front();
    level->second.pop_front();
    if (level->second.empty()) levels.erase(level);
    auto it = orders.find(id);
    LimitOrder resting = it->second;
    orders.erase(it);
    return resting;
}

} // namespace

std::optional<LimitOrder> OrderBook::submit(const LimitOrder& order) {
    if (orders_.count(order.id) != 0)
        throw std::logic_error("OrderBook::submit: duplicate order id");
    if (order.price < 0) throw std::logic_error("OrderBook::submit: negative price");

    if (order.side == Side::Buy) {
        if (!asks_.empty() && asks_.begin()->first <= order.price)
            return pop_front_of_best(asks_, orders_);
        orders_.emplace(order.id, order);
        bids_[order.price].push_back(order.id);
    } else {
        if (!bids_.empty() && bids_.begin()->first >= order.price)
            return pop_front_of_best(bids_, orders_);
        orders_.emplace(order.id, order);
        asks_[order.price].push_back(order.id);
    }
    assert(!best_bid() || !best_ask() || *best_bid() < *best_ask());
    return std::nullopt;
}

bool OrderBook::withdraw(OrderId id) {
    auto it = orders_.find(id);
    if (it == orders_.end()) return false;
    const LimitOrder& order = it->second;

    auto erase_from = [&](auto& levels) {
        auto level = levels.find(order.price);
        assert(level != levels.end());
        auto& queue = level->second;
        for (auto q = queue.begin(); q != queue.end(); ++q) {
            if (*q == id) {
                queue.erase(q);
                break;
            }
        }
        if (queue.empty()) levels.erase(level);
    };
    if (order.side == Side::Buy)
        erase_from(bids_);
    else
        erase_from(asks_);
    orders_.erase(it);
    return true;
}

} // namespace fragsim
