#pragma once
#include <memory>
#include <ostream>
#include <vector>

#include "fragsim/event_queue.hpp"
#include "fragsim/exchange.hpp"
#include "fragsim/fundamental.hpp"
#include "fragsim/metrics.hpp"
#include "fragsim/sip.hpp"
#include "fragsim/traders.hpp"

namespace fragsim {

// Fully resolved parameters of a single run.
struct SimParams {
    int exchange_count = 1;  // 1 or 2
    bool with_la = false;
    Time sip_latency = 0;
    Time horizon = 0;
    double arrival_rate = 0.0;  // lambda
    double fundamental_mean = 100000.0;
    double reversion = 0.05;
    double shock_variance = 5'000'000.0;
    double pv_variance = 5'000'000.0;
    double la_alpha = 0.001;
    std::int64_t max_position = 10;
    GreedyVariant variant = GreedyVariant::BestGuess;
    bool greedy_enabled = true;
    bool exec_time_zi_only = false;
};

// One self-contained market run: exchanges + SIP + fundamental + traders,
// driven by the event queue to the horizon. Owns a single RNG stream
// consumed in a fixed order: fundamental shocks, private-benefit vectors in
// trader-creation order, initial arrivals, then event-driven draws.
class Simulation {
public:
    Simulation(const SimParams& params, const std::vector<ZiStrategy>& strategies,
               std::uint64_t seed);

    // Dispatches all events with time <= horizon.
    void run();

    // Metric fields of the result; metadata is left to the caller.
    RunResult collect() const;

    const RunLogs& logs() const { return logs_; }
    const std::vector<ZiTrader>& traders() const { return zi_; }
    const LaTrader* la() const { return la_.get(); }
    const FundamentalSeries& fundamental() const { return fundamental_; }
    const Exchange& exchange(ExchangeId id) const { return *exchanges_[static_cast<std::size_t>(id)]; }
    Sip& sip() { return *sip_; }
    Rng& rng() { return rng_; }

    // Optional newline-delimited dispatch trace: "time seq kind".
    void set_event_trace(std::ostream* sink) { trace_sink_ = sink; }

    // Optional CSV traces; call before run().
    void set_order_log(std::ostream* sink);  // time,venue,event,order_id,trader_id,side,price,exec_price
    void set_nbbo_log(std::ostream* sink);   // time,bid,bid_ex,ask,ask_ex

private:
    struct FeedRecorder : BboListener, NbboListener {
        RunLogs* logs = nullptr;
        void on_bbo(const Quote& q) override {
            logs->bbo[static_cast<std::size_t>(q.exchange)].push_back(BboObservation{q.bid, q.ask});
        }
        void on_nbbo(const NbboQuote& q) override {
            logs->nbbo.push_back(BboObservation{q.bid, q.ask});
        }
    };

    struct NbboTraceWriter : NbboListener {
        std::ostream* sink = nullptr;
        void on_nbbo(const NbboQuote& q) override;
    };

    void handle_trade(const Trade& trade);
    void deliver_receipt(TraderId trader, OrderId order, Side side, Price price);

    SimParams params_;
    Rng rng_;
    EventQueue queue_;
    std::vector<std::unique_ptr<Exchange>> exchanges_;
    std::vector<Exchange*> exchange_ptrs_;
    std::unique_ptr<Sip> sip_;
    FundamentalSeries fundamental_;
    std::vector<ZiTrader> zi_;
    std::unique_ptr<LaTrader> la_;
    FeedRecorder recorder_;
    RunLogs logs_;
    std::uint64_t next_order_id_ = 0;
    std::ostream* trace_sink_ = nullptr;
    std::ostream* order_log_ = nullptr;
    std::unique_ptr<NbboTraceWriter> nbbo_trace_;
};

// Convenience wrapper: construct, run, collect.
RunResult run_simulation(const SimParams& params, const std::vector<ZiStrategy>& strategies,
                         std::uint64_t seed);

} // namespace fragsim
