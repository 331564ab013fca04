#include "fragsim/simulation.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fragsim {

Simulation::Simulation(const SimParams& params, const std::vector<ZiStrategy>& strategies,
                       std::uint64_t seed)
    : params_(params), rng_(seed) {
    if (params.exchange_count < 1 || params.exchange_count > 2)
        throw std::invalid_argument("Simulation: exchange_count must be 1 or 2");
    if (params.with_la && params.exchange_count < 2)
        throw std::invalid_argument("Simulation: arbitrageur requires two exchanges");
    if (params.arrival_rate <= 0.0)
        throw std::invalid_argument("Simulation: arrival_rate must be positive");

    std::vector<ExchangeId> ids;
    for (int i = 0; i < params.exchange_count; ++i) {
        exchanges_.push_back(std::make_unique<Exchange>(static_cast<ExchangeId>(i)));
        exchange_ptrs_.push_back(exchanges_.back().get());
        ids.push_back(static_cast<ExchangeId>(i));
    }
    logs_.bbo.resize(exchanges_.size());
    recorder_.logs = &logs_;

    sip_ = std::make_unique<Sip>(ids, params.sip_latency, &queue_);
    for (auto& ex : exchanges_) {
        ex->subscribe(sip_.get());
        ex->set_trade_handler([this](const Trade& t) { handle_trade(t); });
    }

    FundamentalParams fp;
    fp.mean = params.fundamental_mean;
    fp.reversion = params.reversion;
    fp.shock_variance = params.shock_variance;
    fp.horizon = params.horizon;
    fundamental_ = FundamentalSeries::generate(fp, rng_);

    const double pv_sd = std::sqrt(params.pv_variance);
    zi_.reserve(strategies.size());
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const ExchangeId primary =
            params.exchange_count == 1 ? 0 : static_cast<ExchangeId>(i % 2);
        zi_.emplace_back(static_cast<TraderId>(i), primary, strategies[i],
                         PrivateBenefits::draw(params.max_position, pv_sd, rng_));
    }

    if (params.with_la) {
        la_ = std::make_unique<LaTrader>(static_cast<TraderId>(strategies.size()),
                                         params.la_alpha, exchange_ptrs_, &next_order_id_);
        for (auto& ex : exchanges_) ex->subscribe(la_.get());
    }
    for (auto& ex : exchanges_) ex->subscribe(&recorder_);
    sip_->subscribe(&recorder_);

    const double mean_interarrival = 1.0 / params.arrival_rate;
    for (std::size_t i = 0; i < zi_.size(); ++i) {
        const Time arrival = static_cast<Time>(std::ceil(rng_.exponential(mean_interarrival)));
        Event ev;
        ev.kind = EventKind::ZiArrival;
        ev.trader = static_cast<TraderId>(i);
        queue_.schedule(arrival, ev);
    }
}

void Simulation::run() {
    MarketContext ctx{queue_,
                      exchange_ptrs_,
                      *sip_,
                      fundamental_,
                      rng_,
                      params_.variant,
                      params_.greedy_enabled,
                      1.0 / params_.arrival_rate,
                      params_.max_position,
                      &next_order_id_};

    auto handler = [&](const Event& ev) {
        if (ev.kind == EventKind::ZiArrival)
            zi_[static_cast<std::size_t>(ev.trader)].on_arrival(ev.time, ctx);
        else
            sip_->apply_update(ev.exchange, ev.snapshot, ev.time);
    };

    if (trace_sink_) {
        run_events(queue_, handler, params_.horizon, [this](const Event& ev) {
            *trace_sink_ << ev.time << ' ' << ev.seq << ' '
                         << (ev.kind == EventKind::ZiArrival ? "zi_arrival" : "nbbo_update")
                         << '\n';
        });
    } else {
        run_events(queue_, handler, params_.horizon);
    }
}

namespace {
const char* side_name(Side side) { return side == Side::Buy ? "BUY" : "SELL"; }
} // namespace

void Simulation::NbboTraceWriter::on_nbbo(const NbboQuote& q) {
    auto field = [](const std::optional<Price>& p) { return p ? std::to_string(*p) : std::string(); };
    auto venue = [&](const std::optional<Price>& p, ExchangeId ex) {
        return p ? std::to_string(ex) : std::string();
    };
    *sink << q.time << ',' << field(q.bid) << ',' << venue(q.bid, q.bid_exchange) << ','
          << field(q.ask) << ',' << venue(q.ask, q.ask_exchange) << '\n';
}

void Simulation::set_order_log(std::ostream* sink) {
    order_log_ = sink;
    if (!sink) return;
    *sink << "time,venue,event,order_id,trader_id,side,price,exec_price\n";
    for (auto& ex : exchanges_) {
        std::ostream* out = sink;
        ex->set_order_hooks(
            [out](const LimitOrder& o, Time t) {
                *out << t << ',' << o.venue << ",ADD," << o.id << ',' << o.trader << ','
                     << side_name(o.side) << ',' << o.price << ",\n";
            },
            [out, id = ex->id()](OrderId order, Time t) {
                *out << t << ',' << id << ",WITHDRAW," << order << ",,,,\n";
            });
    }
}

void Simulation::set_nbbo_log(std::ostream* sink) {
    if (!sink) return;
    nbbo_trace_ = std::make_unique<NbboTraceWriter>();
    nbbo_trace_->sink = sink;
    *sink << "time,bid,bid_ex,ask,ask_ex\n";
    sip_->subscribe(nbbo_trace_.get());
}

void Simulation::handle_trade(const Trade& trade) {
    if (order_log_) {
        *order_log_ << trade.time << ',' << trade.venue << ",TRADE," << trade.buy_order << ','
                    << trade.buyer << ",BUY," << trade.price << ',' << trade.price << '\n';
        *order_log_ << trade.time << ',' << trade.venue << ",TRADE," << trade.sell_order << ','
                    << trade.seller << ",SELL," << trade.price << ',' << trade.price << '\n';
    }
    logs_.trades.push_back(trade);
    if (trade.aggressor_side == Side::Buy) {
        deliver_receipt(trade.buyer, trade.buy_order, Side::Buy, trade.price);
        deliver_receipt(trade.seller, trade.sell_order, Side::Sell, trade.price);
    } else {
        deliver_receipt(trade.seller, trade.sell_order, Side::Sell, trade.price);
        deliver_receipt(trade.buyer, trade.buy_order, Side::Buy, trade.price);
    }
}

void Simulation::deliver_receipt(TraderId trader, OrderId order, Side side, Price price) {
    if (la_ && trader == la_->id()) {
        la_->on_fill(order, side, price);
        return;
    }
    ZiTrader& zi = zi_[static_cast<std::size_t>(trader)];
    zi.on_fill(order, side, price);
    if (std::llabs(zi.position()) > params_.max_position)
        throw std::logic_error("Simulation: trader position exceeds the limit");
}

RunResult Simulation::collect() const {
    RunResult result;
    const double terminal = fundamental_.raw(params_.horizon);

    std::int64_t cash_total = 0;
    std::int64_t position_total = 0;
    double zi_total = 0.0;
    for (const ZiTrader& trader : zi_) {
        zi_total += trader.terminal_surplus(terminal);
        cash_total += trader.cash();
        position_total += trader.position();
    }
    result.zi_surplus = zi_total;
    if (la_) {
        result.la_surplus = static_cast<double>(la_->cash());
        cash_total += la_->cash();
        position_total += la_->position();
        if (la_->position() != 0)
            throw std::logic_error("Simulation: arbitrageur ended with open position");
    }
    if (cash_total != 0 || position_total != 0)
        throw std::logic_error("Simulation: cash/position conservation violated");

    std::optional<TraderId> la_id;
    if (la_) la_id = la_->id();
    result.nbbo_spread_median = median_nbbo_spread(logs_.nbbo);
    result.bbo_spread_mean_median = mean_median_bbo_spread(logs_.bbo);
    result.exec_time_mean =
        mean_execution_time(logs_.trades, la_id, params_.exec_time_zi_only);
    const auto counts = count_transactions(logs_.trades, la_id);
    result.zi_transactions = counts.first;
    result.la_transactions = counts.second;
    return result;
}

RunResult run_simulation(const SimParams& params, const std::vector<ZiStrategy>& strategies,
                         std::uint64_t seed) {
    Simulation sim(params, strategies, seed);
    sim.run();
    return sim.collect();
}

} // namespace fragsim
