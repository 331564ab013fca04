#pragma once
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fragsim/event_queue.hpp"
#include "fragsim/exchange.hpp"
#include "fragsim/fundamental.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/sip.hpp"
#include "fragsim/types.hpp"

namespace fragsim {

// How the background traders interpret the quote-taking ("greedy") rule and
// how orders are routed across venues. Fixed per run.
//   BestGuess          - take the best quote seen on the primary feed or the
//                        NBBO, repricing the order to that quote.
//   MarketSim          - consider the primary feed only; on a take, reprice
//                        the order to the trader's own valuation.
//   MarketSimRoutingBug- MarketSim plus a routing defect that applies the
//                        buy-side routing test to every order.
enum class GreedyVariant { BestGuess, MarketSim, MarketSimRoutingBug };

// One row of the background-trader strategy table: uniform shading range
// [shade_min, shade_max] off the valuation, and the surplus fraction at
// which an available quote is taken instead of posting the shaded price.
struct ZiStrategy {
    std::int64_t shade_min = 0;
    std::int64_t shade_max = 0;
    double take_fraction = 1.0;
};

// Marginal private benefit theta^q for position changes, q in
// [-max_position+1, max_position], drawn i.i.d. Gaussian and sorted
// non-increasing. Values are never rounded.
class PrivateBenefits {
public:
    static PrivateBenefits draw(std::int64_t max_position, double stddev, Rng& rng);
    static PrivateBenefits from_values(std::vector<double> sorted_desc);

    double level(std::int64_t q) const {
        return values_[static_cast<std::size_t>(q + max_position_ - 1)];
    }
    double marginal_buy(std::int64_t position) const { return level(position + 1); }
    double marginal_sell(std::int64_t position) const { return level(position); }
    std::int64_t max_position() const { return max_position_; }

private:
    std::vector<double> values_;
    std::int64_t max_position_ = 0;
};

// Quotes visible to a background trader when it prices an order: the live
// BBO of its primary exchange and the last NBBO it received (stale when the
// consolidator is latent).
struct ObservedQuotes {
    std::optional<Price> primary_bid;
    std::optional<Price> primary_ask;
    std::optional<Price> nbbo_bid;
    std::optional<Price> nbbo_ask;
};

// round(estimate + marginal private benefit) for the side being traded.
std::int64_t compute_valuation(std::int64_t terminal_estimate, const PrivateBenefits& benefits,
                               std::int64_t position, Side side);

// Uniform integer shade off the valuation, clipped at zero.
Price draw_shaded_price(std::int64_t valuation, const ZiStrategy& strategy, Side side, Rng& rng);

// Applies the variant's quote-taking rule; returns the (possibly replaced)
// order price. Ties on the threshold comparison take the quote.
Price apply_greedy(GreedyVariant variant, Side side, std::int64_t valuation, Price shaded,
                   double take_fraction, const ObservedQuotes& quotes);

// Chooses the venue: the NBBO-attributed exchange iff the NBBO side beats
// the primary BBO side and the order price crosses it; comparisons against
// an empty NBBO side are false. The bug variant runs the buy-side test for
// every order.
ExchangeId route_order(GreedyVariant variant, Side side, Price order_price, ExchangeId primary,
                       const Quote& primary_bbo, const NbboQuote& nbbo);

// Terminal surplus: cash plus position valued at the terminal fundamental
// plus the private benefits of the net position.
double zi_terminal_surplus(std::int64_t cash, std::int64_t position, double terminal_value,
                           const PrivateBenefits& benefits);

// Everything a trader touches when acting. Owned by the simulation.
struct MarketContext {
    EventQueue& queue;
    std::vector<Exchange*>& exchanges;
    Sip& sip;
    const FundamentalSeries& fundamental;
    Rng& rng;
    GreedyVariant variant = GreedyVariant::BestGuess;
    bool greedy_enabled = true;
    double arrival_mean = 0.0;  // mean interarrival time, 1/lambda
    std::int64_t max_position = 0;
    std::uint64_t* next_order_id = nullptr;

    Exchange& exchange(ExchangeId id) const { return *exchanges[static_cast<std::size_t>(id)]; }
    OrderId take_order_id() const { return (*next_order_id)++; }
};

// Zero-intelligence background trader. On each arrival it reschedules
// itself, withdraws its resting order, flips a coin for the side, prices a
// single-unit order off the estimated terminal fundamental and submits it
// through the routing rule. Draw order per arrival is fixed: interarrival,
// side, shade.
class ZiTrader {
public:
    ZiTrader(TraderId id, ExchangeId primary, ZiStrategy strategy, PrivateBenefits benefits)
        : id_(id), primary_(primary), strategy_(strategy), benefits_(std::move(benefits)) {}

    void on_arrival(Time t, MarketContext& ctx);
    void on_fill(OrderId order, Side own_side, Price price);

    TraderId id() const { return id_; }
    ExchangeId primary_exchange() const { return primary_; }
    const ZiStrategy& strategy() const { return strategy_; }
    const PrivateBenefits& benefits() const { return benefits_; }
    std::int64_t position() const { return position_; }
    std::int64_t cash() const { return cash_; }
    std::int64_t transactions() const { return transactions_; }
    const std::optional<std::pair<OrderId, ExchangeId>>& outstanding() const { return outstanding_; }

    double terminal_surplus(double terminal_value) const {
        return zi_terminal_surplus(cash_, position_, terminal_value, benefits_);
    }

private:
    TraderId id_;
    ExchangeId primary_;
    ZiStrategy strategy_;
    PrivateBenefits benefits_;
    std::int64_t position_ = 0;
    std::int64_t cash_ = 0;
    std::int64_t transactions_ = 0;
    std::optional<std::pair<OrderId, ExchangeId>> outstanding_;
};

// Latency arbitrageur. Subscribes to every exchange's BBO with zero latency;
// when the cross-venue best bid exceeds (1+alpha) times the best ask it
// buys at the floored midpoint on the ask venue and sells at the ceiled
// midpoint on the bid venue, returning flat with profit bid* - ask*.
class LaTrader : public BboListener {
public:
    struct Arbitrage {
        Time time = 0;
        Price best_bid = 0;
        Price best_ask = 0;
    };

    LaTrader(TraderId id, double alpha, std::vector<Exchange*> exchanges,
             std::uint64_t* next_order_id)
        : id_(id), alpha_(alpha), exchanges_(std::move(exchanges)),
          next_order_id_(next_order_id) {
        views_.resize(exchanges_.size());
    }

    void on_bbo(const Quote& quote) override;
    void on_fill(OrderId order, Side own_side, Price price);

    TraderId id() const { return id_; }
    std::int64_t position() const { return position_; }
    std::int64_t cash() const { return cash_; }
    std::int64_t transactions() const { return transactions_; }
    const std::vector<Arbitrage>& arbitrages() const { return arbitrages_; }

private:
    std::size_t slot(ExchangeId id) const {
        for (std::size_t i = 0; i < exchanges_.size(); ++i)
            if (exchanges_[i]->id() == id) return i;
        return 0;
    }

    TraderId id_;
    double alpha_;
    std::vector<Exchange*> exchanges_;
    std::uint64_t* next_order_id_;
    std::vector<Quote> views_;
    bool executing_ = false;
    std::int64_t position_ = 0;
    std::int64_t cash_ = 0;
    std::int64_t transactions_ = 0;
    std::vector<Arbitrage> arbitrages_;
};

} // namespace fragsim
