#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragsim/types.hpp"

namespace fragsim {

// One quote publication as seen on a feed (tick time, not clock time).
struct BboObservation {
    std::optional<Price> bid;
    std::optional<Price> ask;
};

// Everything the per-run metrics are computed from.
struct RunLogs {
    std::vector<BboObservation> nbbo;               // every NBBO publication
    std::vector<std::vector<BboObservation>> bbo;   // every BBO publication, per exchange
    std::vector<Trade> trades;
};

// Per-run output record. Metadata fields are filled by the experiment
// runner; metric fields by aggregation at the end of a run.
struct RunResult {
    std::string experiment_id;
    int env = 0;
    std::string config;
    Time latency = 0;
    std::int64_t mixture_index = 0;
    std::int64_t run_index = 0;
    std::uint64_t seed = 0;

    double zi_surplus = 0.0;
    double la_surplus = 0.0;
    std::optional<double> nbbo_spread_median;
    std::optional<double> bbo_spread_mean_median;
    std::optional<double> exec_time_mean;
    std::int64_t zi_transactions = 0;
    std::int64_t la_transactions = 0;
};

// Median of ask - bid over publications where both sides are present and
// bid <= ask (crossed observations dropped); absent when nothing qualifies.
std::optional<double> median_nbbo_spread(const std::vector<BboObservation>& log);

// Per exchange, the median spread over two-sided publications; then the mean
// across exchanges that had at least one two-sided publication.
std::optional<double> mean_median_bbo_spread(const std::vector<std::vector<BboObservation>>& logs);

// Mean of (execution time - submission time) over both legs of every trade;
// the aggressing leg contributes zero. With zi_only set, legs owned by the
// arbitrageur are excluded.
std::optional<double> mean_execution_time(const std::vector<Trade>& trades,
                                          std::optional<TraderId> la_trader, bool zi_only);

// Orders that traded, split by owner type: a ZI-ZI trade adds two to the
// first count, a ZI-LA trade adds one to each.
std::pair<std::int64_t, std::int64_t> count_transactions(const std::vector<Trade>& trades,
                                                         std::optional<TraderId> la_trader);

} // namespace fragsim
