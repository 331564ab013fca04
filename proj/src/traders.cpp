#include "fragsim/traders.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fragsim {

PrivateBenefits PrivateBenefits::draw(std::int64_t max_position, double stddev, Rng& rng) {
    PrivateBenefits pv;
    pv.max_position_ = max_position;
    pv.values_.resize(static_cast<std::size_t>(2 * max_position));
    for (double& v : pv.values_) v = rng.normal(0.0, stddev);
    std::sort(pv.values_.begin(), pv.values_.end(), std::greater<double>());
    return pv;
}

PrivateBenefits PrivateBenefits::from_values(std::vector<double> sorted_desc) {
    if (sorted_desc.empty() || sorted_desc.size() % 2 != 0)
        throw std::invalid_argument("PrivateBenefits: need 2*max_position values");
    PrivateBenefits pv;
    pv.max_position_ = static_cast<std::int64_t>(sorted_desc.size() / 2);
    pv.values_ = std::move(sorted_desc);
    return pv;
}

std::int64_t compute_valuation(std::int64_t terminal_estimate, const PrivateBenefits& benefits,
                               std::int64_t position, Side side) {
    const double benefit = side == Side::Buy ? benefits.marginal_buy(position)
                                             : benefits.marginal_sell(position);
    return round_to_int(static_cast<double>(terminal_estimate) + benefit);
}

Price draw_shaded_price(std::int64_t valuation, const ZiStrategy& strategy, Side side, Rng& rng) {
    std::int64_t lo, hi;
    if (side == Side::Buy) {
        lo = valuation - strategy.shade_max;
        hi = valuation - strategy.shade_min;
    } else {
        lo = valuation + strategy.shade_min;
        hi = valuation + strategy.shade_max;
    }
    return std::max<std::int64_t>(0, rng.uniform_int(lo, hi));
}

Price apply_greedy(GreedyVariant variant, Side side, std::int64_t valuation, Price shaded,
                   double take_fraction, const ObservedQuotes& quotes) {
    const double wanted = take_fraction
        * static_cast<double>(std::llabs(valuation - shaded));

    if (variant == GreedyVariant::BestGuess) {
        // Best prices over the primary feed and the NBBO.
        std::optional<Price> max_bid = quotes.nbbo_bid;
        if (quotes.primary_bid && (!max_bid || *quotes.primary_bid >= *max_bid))
            max_bid = quotes.primary_bid;
        std::optional<Price> min_ask = quotes.nbbo_ask;
        if (quotes.primary_ask && (!min_ask || *quotes.primary_ask <= *min_ask))
            min_ask = quotes.primary_ask;

        if (side == Side::Buy) {
            if (min_ask && wanted <= static_cast<double>(valuation - *min_ask)) return *min_ask;
        } else {
            if (max_bid && wanted <= static_cast<double>(*max_bid - valuation)) return *max_bid;
        }
        return shaded;
    }

    // MarketSim variants: primary feed only; on a take the price becomes the
    // trader's own valuation.
    if (side == Side::Buy) {
        if (quotes.primary_ask && wanted <= static_cast<double>(valuation - *quotes.primary_ask))
            return valuation;
    } else {
        if (quotes.primary_bid && wanted <= static_cast<double>(*quotes.primary_bid - valuation))
            return valuation;
    }
    return shaded;
}

ExchangeId route_order(GreedyVariant variant, Side side, Price order_price, ExchangeId primary,
                       const Quote& primary_bbo, const NbboQuote& nbbo) {
    const bool as_buy = variant == GreedyVariant::MarketSimRoutingBug || side == Side::Buy;
    if (as_buy) {
        const bool nbbo_better =
            nbbo.ask && (!primary_bbo.ask || *nbbo.ask < *primary_bbo.ask);
        const bool will_transact = nbbo.ask && order_price >= *nbbo.ask;
        if (nbbo_better && will_transact) return nbbo.ask_exchange;
    } else {
        const bool nbbo_better =
            nbbo.bid && (!primary_bbo.bid || *nbbo.bid > *primary_bbo.bid);
        const bool will_transact = nbbo.bid && order_price <= *nbbo.bid;
        if (nbbo_better && will_transact) return nbbo.bid_exchange;
    }
    return primary;
}

double zi_terminal_surplus(std::int64_t cash, std::int64_t position, double terminal_value,
                           const PrivateBenefits& benefits) {
    double surplus = static_cast<double>(cash)
        + static_cast<double>(position) * terminal_value;
    if (position > 0) {
        for (std::int64_t q = 1; q <= position; ++q) surplus += benefits.level(q);
    } else if (position < 0) {
        for (std::int64_t q = position + 1; q <= 0; ++q) surplus -= benefits.level(q);
    }
    return surplus;
}

void ZiTrader::on_arrival(Time t, MarketContext& ctx) {
    const Time next = t + static_cast<Time>(std::ceil(ctx.rng.exponential(ctx.arrival_mean)));
    Event ev;
    ev.kind = EventKind::ZiArrival;
    ev.trader = id_;
    ctx.queue.schedule(next, ev);

    if (outstanding_) {
        ctx.exchange(outstanding_->second).withdraw_order(outstanding_->first, t);
        outstanding_.reset();
    }

    const Side side = ctx.rng.uniform_int(0, 1) == 0 ? Side::Buy : Side::Sell;
    const std::int64_t next_position = position_ + (side == Side::Buy ? 1 : -1);
    if (std::llabs(next_position) > ctx.max_position) return;

    const std::int64_t estimate = ctx.fundamental.estimate_terminal(t);
    const std::int64_t valuation = compute_valuation(estimate, benefits_, position_, side);
    Price price = draw_shaded_price(valuation, strategy_, side, ctx.rng);

    Exchange& home = ctx.exchange(primary_);
    const Quote primary_bbo = home.current_quote(t);
    const NbboQuote& nbbo = ctx.sip.current_nbbo();
    if (ctx.greedy_enabled) {
        ObservedQuotes quotes{primary_bbo.bid, primary_bbo.ask, nbbo.bid, nbbo.ask};
        price = apply_greedy(ctx.variant, side, valuation, price, strategy_.take_fraction, quotes);
    }

    LimitOrder order;
    order.id = ctx.take_order_id();
    order.trader = id_;
    order.side = side;
    order.price = price;
    order.submit_time = t;
    order.venue = route_order(ctx.variant, side, price, primary_, primary_bbo, nbbo);

    if (ctx.exchange(order.venue).submit_order(order, t) == Exchange::Outcome::Rested)
        outstanding_ = std::make_pair(order.id, order.venue);
}

void ZiTrader::on_fill(OrderId order, Side own_side, Price price) {
    if (own_side == Side::Buy) {
        ++position_;
        cash_ -= price;
    } else {
        --position_;
        cash_ += price;
    }
    ++transactions_;
    if (outstanding_ && outstanding_->first == order) outstanding_.reset();
}

void LaTrader::on_bbo(const Quote& quote) {
    views_[slot(quote.exchange)] = quote;
    if (executing_) return;

    std::optional<Price> best_bid, best_ask;
    std::size_t bid_slot = 0, ask_slot = 0;
    for (std::size_t i = 0; i < views_.size(); ++i) {
        const Quote& view = views_[i];
        if (view.bid && (!best_bid || *view.bid > *best_bid)) {
            best_bid = view.bid;
            bid_slot = i;
        }
        if (view.ask && (!best_ask || *view.ask < *best_ask)) {
            best_ask = view.ask;
            ask_slot = i;
        }
    }
    if (!best_bid || !best_ask) return;
    if (static_cast<double>(*best_bid) <= (1.0 + alpha_) * static_cast<double>(*best_ask)) return;

    executing_ = true;
    const Price sum = *best_bid + *best_ask;
    const Price buy_price = sum / 2;         // floor of the midpoint
    const Price sell_price = (sum + 1) / 2;  // ceil of the midpoint

    LimitOrder buy;
    buy.id = (*next_order_id_)++;
    buy.trader = id_;
    buy.side = Side::Buy;
    buy.price = buy_price;
    buy.submit_time = quote.time;
    buy.venue = exchanges_[ask_slot]->id();
    exchanges_[ask_slot]->submit_order(buy, quote.time);

    LimitOrder sell;
    sell.id = (*next_order_id_)++;
    sell.trader = id_;
    sell.side = Side::Sell;
    sell.price = sell_price;
    sell.submit_time = quote.time;
    sell.venue = exchanges_[bid_slot]->id();
    exchanges_[bid_slot]->submit_order(sell, quote.time);

    executing_ = false;
    arbitrages_.push_back(Arbitrage{quote.time, *best_bid, *best_ask});
    assert(position_ == 0);
}

void LaTrader::on_fill(OrderId, Side own_side, Price price) {
    if (own_side == Side::Buy) {
        ++position_;
        cash_ -= price;
    } else {
        --position_;
        cash_ += price;
    }
    ++transactions_;
}

} // namespace fragsim
