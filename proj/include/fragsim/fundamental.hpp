#pragma once
#include <cmath>
#include <vector>

#include "fragsim/rng.hpp"
#include "fragsim/types.hpp"

namespace fragsim {

// Rounding rule used for every "nearest integer" conversion in the model:
// half away from zero. Fixed once for determinism.
inline std::int64_t round_to_int(double x) { return std::llround(x); }

struct FundamentalParams {
    double mean = 100000.0;       // long-run level the walk reverts to
    double reversion = 0.05;      // strength of mean reversion, in [0,1]
    double shock_variance = 5e6;  // variance of the per-step Gaussian shock
    Time horizon = 0;             // T
};

// One step of the walk, clipped at zero.
inline double mean_reverting_step(double mean, double reversion, double prev, double shock) {
    return std::max(0.0, reversion * mean + (1.0 - reversion) * prev + shock);
}

// Mean-reverting random walk r_t = max(0, k*mean + (1-k)*r_{t-1} + shock),
// precomputed for t = 0..T with r_0 = mean and stored unrounded.
class FundamentalSeries {
public:
    static FundamentalSeries generate(const FundamentalParams& params, Rng& rng) {
        FundamentalSeries series;
        series.mean_ = params.mean;
        series.reversion_ = params.reversion;
        series.values_.reserve(static_cast<std::size_t>(params.horizon) + 1);
        series.values_.push_back(params.mean);
        const double sd = std::sqrt(params.shock_variance);
        double r = params.mean;
        for (Time t = 1; t <= params.horizon; ++t) {
            const double shock = rng.normal(0.0, sd);
            r = mean_reverting_step(params.mean, params.reversion, r, shock);
            series.values_.push_back(r);
        }
        return series;
    }

    // Wraps an explicit series; for diagnostics and tests.
    static FundamentalSeries from_values(std::vector<double> values, double mean,
                                         double reversion) {
        FundamentalSeries series;
        series.values_ = std::move(values);
        series.mean_ = mean;
        series.reversion_ = reversion;
        return series;
    }

    Time horizon() const { return static_cast<Time>(values_.size()) - 1; }
    double raw(Time t) const { return values_[static_cast<std::size_t>(t)]; }

    // r_t rounded to the nearest integer, as seen by a trader looking it up.
    std::int64_t value_at(Time t) const { return round_to_int(raw(t)); }

    // Expected value at the horizon given r_t, under the reversion process;
    // the unrounded r_t enters the formula and only the result is rounded.
    std::int64_t estimate_terminal(Time t) const {
        const double w = std::pow(1.0 - reversion_, static_cast<double>(horizon() - t));
        return round_to_int((1.0 - w) * mean_ + w * raw(t));
    }

private:
    std::vector<double> values_;
    double mean_ = 0.0;
    double reversion_ = 0.0;
};

} // namespace fragsim
