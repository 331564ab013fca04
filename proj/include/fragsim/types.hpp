#pragma once
#include <cstdint>
#include <optional>

namespace fragsim {

// Discrete simulation tick. Valid event times are 1..T; 0 is "before the open".
using Time = std::int64_t;

// Integer currency units. All order prices are non-negative integers.
using Price = std::int64_t;

using OrderId = std::uint64_t;
using TraderId = std::int32_t;
using ExchangeId = std::int32_t;

enum class Side : std::uint8_t { Buy, Sell };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }

// Best bid/offer snapshot of one exchange; a side is empty iff that side of
// the book is empty.
struct Quote {
    std::optional<Price> bid;
    std::optional<Price> ask;
    ExchangeId exchange = -1;
    Time time = 0;
};

// Consolidated best bid/offer with venue attribution. A price is empty iff
// its exchange attribution is unset. May be locked or crossed (bid >= ask)
// when built from stale per-exchange views.
struct NbboQuote {
    std::optional<Price> bid;
    ExchangeId bid_exchange = -1;
    std::optional<Price> ask;
    ExchangeId ask_exchange = -1;
    Time time = 0;
};

// Single-unit limit order. Quantity is always one by construction.
struct LimitOrder {
    OrderId id = 0;
    TraderId trader = -1;
    Side side = Side::Buy;
    Price price = 0;
    Time submit_time = 0;
    ExchangeId venue = -1;
};

// Executed match. The execution price is the resting order's limit price.
struct Trade {
    Time time = 0;
    ExchangeId venue = -1;
    Price price = 0;
    Side aggressor_side = Side::Buy;
    OrderId buy_order = 0;
    OrderId sell_order = 0;
    TraderId buyer = -1;
    TraderId seller = -1;
    Time buy_submit_time = 0;
    Time sell_submit_time = 0;
};

} // namespace fragsim
