#include "fragsim/exchange.hpp"

namespace fragsim {

Exchange::Outcome Exchange::submit_order(const LimitOrder& order, Time t) {
    if (on_add_) on_add_(order, t);
    auto matched = book_.submit(order);
    if (matched) {
        Trade trade;
        trade.time = t;
        trade.venue = id_;
        trade.price = matched->price;
        trade.aggressor_side = order.side;
        const LimitOrder& buy = order.side == Side::Buy ? order : *matched;
        const LimitOrder& sell = order.side == Side::Sell ? order : *matched;
        trade.buy_order = buy.id;
        trade.sell_order = sell.id;
        trade.buyer = buy.trader;
        trade.seller = sell.trader;
        trade.buy_submit_time = buy.submit_time;
        trade.sell_submit_time = sell.submit_time;
        if (trade_handler_) trade_handler_(trade);
        publish_bbo(t);
        return Outcome::Traded;
    }
    publish_bbo(t);
    return Outcome::Rested;
}

void Exchange::withdraw_order(OrderId id, Time t) {
    // Unknown or already-executed ids are ignored; no book change, no publication.
    if (book_.withdraw(id)) {
        if (on_withdraw_) on_withdraw_(id, t);
        publish_bbo(t);
    }
}

void Exchange::publish_bbo(Time t) {
    const Quote quote = current_quote(t);
    for (BboListener* listener : subscribers_) listener->on_bbo(quote);
}

} // namespace fragsim
