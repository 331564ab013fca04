#include <doctest.h>

#include <vector>

#include "fragsim/event_queue.hpp"
#include "fragsim/exchange.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/sip.hpp"

using namespace fragsim;

namespace {

struct NbboLog : NbboListener {
    std::vector<NbboQuote> quotes;
    void on_nbbo(const NbboQuote& q) override { quotes.push_back(q); }
};

Quote quote(ExchangeId ex, std::optional<Price> bid, std::optional<Price> ask, Time t) {
    return Quote{bid, ask, ex, t};
}

LimitOrder make(OrderId id, Side side, Price price, Time t, ExchangeId venue) {
    LimitOrder o;
    o.id = id;
    o.trader = static_cast<TraderId>(id);
    o.side = side;
    o.price = price;
    o.submit_time = t;
    o.venue = venue;
    return o;
}

} // namespace

TEST_CASE("zero latency consolidates synchronously") {
    EventQueue q;
    Sip sip({0}, 0, &q);
    NbboLog log;
    sip.subscribe(&log);
    sip.on_bbo(quote(0, 100, 101, 5));
    REQUIRE(log.quotes.size() == 1);
    CHECK(log.quotes[0].bid == Price{100});
    CHECK(log.quotes[0].bid_exchange == 0);
    CHECK(log.quotes[0].ask == Price{101});
    CHECK(log.quotes[0].ask_exchange == 0);
    CHECK(q.empty());
}

TEST_CASE("positive latency schedules the update at t plus delay") {
    EventQueue q;
    Sip sip({0, 1}, 50, &q);
    NbboLog log;
    sip.subscribe(&log);
    sip.on_bbo(quote(0, 100, 101, 200));
    CHECK(log.quotes.empty());
    REQUIRE(q.size() == 1);
    CHECK(q.peek().time == 250);

    int fired = 0;
    run_events(q, [&](const Event& ev) {
        ++fired;
        sip.apply_update(ev.exchange, ev.snapshot, ev.time);
    }, 10000);
    CHECK(fired == 1);
    REQUIRE(log.quotes.size() == 1);
    CHECK(log.quotes[0].time == 250);
    CHECK(log.quotes[0].bid == Price{100});
}

TEST_CASE("updates scheduled past the horizon never apply") {
    EventQueue q;
    const Time horizon = 1000;
    Sip sip({0}, 50, &q);
    NbboLog log;
    sip.subscribe(&log);
    sip.on_bbo(quote(0, 90, 95, 900));       // applies at 950
    sip.on_bbo(quote(0, 100, 101, 990));     // would apply at 1040, never fires
    run_events(q, [&](const Event& ev) { sip.apply_update(ev.exchange, ev.snapshot, ev.time); },
               horizon);
    REQUIRE(log.quotes.size() == 1);
    CHECK(sip.current_nbbo().bid == Price{90});
}

TEST_CASE("crossed consolidated quotes are representable") {
    EventQueue q;
    Sip sip({0, 1}, 0, &q);
    sip.apply_update(0, quote(0, 99, 102, 1), 1);
    sip.apply_update(1, quote(1, 101, 100, 2), 2);
    const NbboQuote& nbbo = sip.current_nbbo();
    CHECK(nbbo.bid == Price{101});
    CHECK(nbbo.bid_exchange == 1);
    CHECK(nbbo.ask == Price{100});
    CHECK(nbbo.ask_exchange == 1);
}

TEST_CASE("ties go to the first exchange in the configured order") {
    EventQueue q;
    Sip sip({0, 1}, 0, &q);
    sip.apply_update(0, quote(0, 100, 105, 1), 1);
    sip.apply_update(1, quote(1, 100, 105, 2), 2);
    CHECK(sip.current_nbbo().bid_exchange == 0);
    CHECK(sip.current_nbbo().ask_exchange == 0);
}

TEST_CASE("empty sides propagate as empty with no attribution") {
    EventQueue q;
    Sip sip({0, 1}, 0, &q);
    sip.apply_update(0, quote(0, std::nullopt, std::nullopt, 1), 1);
    sip.apply_update(1, quote(1, std::nullopt, 105, 2), 2);
    const NbboQuote& nbbo = sip.current_nbbo();
    CHECK(!nbbo.bid);
    CHECK(nbbo.bid_exchange == -1);
    CHECK(nbbo.ask == Price{105});
    CHECK(nbbo.ask_exchange == 1);
}

TEST_CASE("with zero latency every published consolidated quote matches brute force") {
    EventQueue q;
    Exchange ex0(0), ex1(1);
    Sip sip({0, 1}, 0, &q);
    ex0.subscribe(&sip);
    ex1.subscribe(&sip);

    struct Oracle : NbboListener {
        Exchange* a;
        Exchange* b;
        int checked = 0;
        void on_nbbo(const NbboQuote& got) override {
            std::optional<Price> bid, ask;
            ExchangeId bid_ex = -1, ask_ex = -1;
            for (Exchange* ex : {a, b}) {
                const auto eb = ex->best_bid();
                const auto ea = ex->best_ask();
                if (eb && (!bid || *eb > *bid)) {
                    bid = eb;
                    bid_ex = ex->id();
                }
                if (ea && (!ask || *ea < *ask)) {
                    ask = ea;
                    ask_ex = ex->id();
                }
            }
            CHECK(got.bid == bid);
            CHECK(got.ask == ask);
            CHECK(got.bid_exchange == bid_ex);
            CHECK(got.ask_exchange == ask_ex);
            ++checked;
        }
    } oracle;
    oracle.a = &ex0;
    oracle.b = &ex1;
    sip.subscribe(&oracle);

    Rng rng(11);
    OrderId next = 1;
    int publications = 0;
    for (Time t = 1; t <= 400; ++t) {
        Exchange& ex = rng.uniform_int(0, 1) == 0 ? ex0 : ex1;
        const Side side = rng.uniform_int(0, 1) == 0 ? Side::Buy : Side::Sell;
        ex.submit_order(make(next++, side, rng.uniform_int(95, 105), t, ex.id()), t);
        ++publications;
    }
    // One consolidated publication per exchange publication; trades publish once.
    CHECK(oracle.checked >= publications);
}
