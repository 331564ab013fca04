#include "fragsim/metrics.hpp"

#include <algorithm>

namespace fragsim {

namespace {

std::optional<double> median(std::vector<std::int64_t>& values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return static_cast<double>(values[n / 2]);
    return 0.5 * (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2]));
}

} // namespace

std::optional<double> median_nbbo_spread(const std::vector<BboObservation>& log) {
    std::vector<std::int64_t> spreads;
    spreads.reserve(log.size());
    for (const auto& obs : log) {
        if (obs.bid && obs.ask && *obs.bid <= *obs.ask) spreads.push_back(*obs.ask - *obs.bid);
    }
    return median(spreads);
}

std::optional<double> mean_median_bbo_spread(const std::vector<std::vector<BboObservation>>& logs) {
    double sum = 0.0;
    int defined = 0;
    for (const auto& log : logs) {
        std::vector<std::int64_t> spreads;
        spreads.reserve(log.size());
        for (const auto& obs : log) {
            if (obs.bid && obs.ask) spreads.push_back(*obs.ask - *obs.bid);
        }
        if (auto m = median(spreads)) {
            sum += *m;
            ++defined;
        }
    }
    if (defined == 0) return std::nullopt;
    return sum / defined;
}

std::optional<double> mean_execution_time(const std::vector<Trade>& trades,
                                          std::optional<TraderId> la_trader, bool zi_only) {
    std::int64_t total = 0;
    std::int64_t legs = 0;
    for (const Trade& trade : trades) {
        if (!zi_only || !la_trader || trade.buyer != *la_trader) {
            total += trade.time - trade.buy_submit_time;
            ++legs;
        }
        if (!zi_only || !la_trader || trade.seller != *la_trader) {
            total += trade.time - trade.sell_submit_time;
            ++legs;
        }
    }
    if (legs == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(legs);
}

std::pair<std::int64_t, std::int64_t> count_transactions(const std::vector<Trade>& trades,
                                                         std::optional<TraderId> la_trader) {
    std::int64_t zi = 0;
    std::int64_t la = 0;
    for (const Trade& trade : trades) {
        (la_trader && trade.buyer == *la_trader ? la : zi) += 1;
        (la_trader && trade.seller == *la_trader ? la : zi) += 1;
    }
    return {zi, la};
}

} // namespace fragsim
