#include "fragsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fragsim {

std::int64_t MixtureGroupedSample::run_count() const {
    std::int64_t n = 0;
    for (const auto& g : groups) n += static_cast<std::int64_t>(g.size());
    return n;
}

double MixtureGroupedSample::overall_mean() const {
    double sum = 0.0;
    std::int64_t n = 0;
    for (const auto& g : groups) {
        for (double v : g) sum += v;
        n += static_cast<std::int64_t>(g.size());
    }
    if (n == 0) throw std::invalid_argument("empty sample");
    return sum / static_cast<double>(n);
}

MixtureGroupedSample group_by_mixture(const std::vector<RunResult>& rows,
                                      const std::string& metric) {
    double RunResult::* field = nullptr;
    if (metric == "zi_surplus")
        field = &RunResult::zi_surplus;
    else if (metric == "la_surplus")
        field = &RunResult::la_surplus;
    else
        throw std::invalid_argument("unsupported metric '" + metric + "'");

    std::map<std::int64_t, std::vector<double>> grouped;
    for (const RunResult& row : rows) grouped[row.mixture_index].push_back(row.*field);
    MixtureGroupedSample sample;
    sample.groups.reserve(grouped.size());
    for (auto& [idx, values] : grouped) sample.groups.push_back(std::move(values));
    return sample;
}

Interval percentile_interval(const std::vector<double>& sorted_means, double level) {
    const auto b = static_cast<double>(sorted_means.size());
    const double half_alpha = (1.0 - level) / 2.0;
    // Nearest rank, 1-based; the epsilon keeps e.g. 0.025*1000 from landing
    // just above 25 in floating point.
    auto rank = [&](double q) {
        const auto r = static_cast<std::int64_t>(std::ceil(q * b - 1e-9));
        return std::clamp<std::int64_t>(r, 1, static_cast<std::int64_t>(b));
    };
    return Interval{sorted_means[static_cast<std::size_t>(rank(half_alpha) - 1)],
                    sorted_means[static_cast<std::size_t>(rank(1.0 - half_alpha) - 1)]};
}

namespace {

struct GroupSums {
    std::vector<double> sum;
    std::vector<double> count;
};

GroupSums group_sums(const MixtureGroupedSample& sample) {
    GroupSums gs;
    gs.sum.reserve(sample.groups.size());
    gs.count.reserve(sample.groups.size());
    for (const auto& g : sample.groups) {
        if (g.empty()) throw std::invalid_argument("empty mixture group");
        gs.sum.push_back(std::accumulate(g.begin(), g.end(), 0.0));
        gs.count.push_back(static_cast<double>(g.size()));
    }
    return gs;
}

BootstrapReport bootstrap_from_indices(const GroupSums& gs, const std::vector<std::size_t>& pool,
                                       std::int64_t samples, std::int64_t draw_size, Rng& rng) {
    BootstrapReport report;
    report.draw_size = draw_size;
    report.means.reserve(static_cast<std::size_t>(samples));
    const auto pool_size = static_cast<std::int64_t>(pool.size());
    for (std::int64_t s = 0; s < samples; ++s) {
        double total = 0.0;
        double n = 0.0;
        for (std::int64_t d = 0; d < draw_size; ++d) {
            const auto pick = pool[static_cast<std::size_t>(rng.uniform_int(0, pool_size - 1))];
            total += gs.sum[pick];
            n += gs.count[pick];
        }
        report.means.push_back(total / n);
    }

    double mean = 0.0;
    for (double m : report.means) mean += m;
    mean /= static_cast<double>(samples);
    report.mean_of_means = mean;
    if (samples > 1) {
        double ss = 0.0;
        for (double m : report.means) ss += (m - mean) * (m - mean);
        report.se = std::sqrt(ss / static_cast<double>(samples - 1));
    }

    std::vector<double> sorted = report.means;
    std::sort(sorted.begin(), sorted.end());
    report.ci95 = percentile_interval(sorted, 0.95);
    report.ci99 = percentile_interval(sorted, 0.99);
    return report;
}

} // namespace

BootstrapReport bootstrap_ci(const MixtureGroupedSample& sample, std::int64_t samples,
                             std::int64_t draw_size, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("need at least one bootstrap sample");
    if (draw_size < 1 || draw_size > sample.mixture_count())
        throw std::invalid_argument("draw_size must be in [1, mixture count]");
    const GroupSums gs = group_sums(sample);
    std::vector<std::size_t> pool(sample.groups.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    return bootstrap_from_indices(gs, pool, samples, draw_size, rng);
}

AlignmentDecision alignment_test(const BootstrapReport& report, double target) {
    AlignmentDecision decision;
    decision.accept95 = report.ci95.contains(target);
    decision.accept99 = report.ci99.contains(target);
    decision.diff95 = Interval{report.ci95.lo - target, report.ci95.hi - target};
    decision.diff99 = Interval{report.ci99.lo - target, report.ci99.hi - target};
    return decision;
}

namespace {

// Lentz's continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double one_sample_t_test(const std::vector<double>& values, double target) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (n < 2) throw std::invalid_argument("t test needs at least two values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(n - 1);
    if (variance == 0.0) return mean == target ? 1.0 : 0.0;

    const double t = (mean - target) / std::sqrt(variance / static_cast<double>(n));
    const double dof = static_cast<double>(n - 1);
    return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

SelfAlignmentResult self_alignment_experiment(const MixtureGroupedSample& sample,
                                              std::int64_t trials, std::int64_t holdout,
                                              std::int64_t draw_size, std::int64_t samples,
                                              Rng& rng) {
    const std::int64_t m_total = sample.mixture_count();
    if (holdout < 1 || draw_size < 1 || holdout + draw_size > m_total)
        throw std::invalid_argument("need mixture count >= holdout + draw_size");

    const GroupSums gs = group_sums(sample);
    SelfAlignmentResult result;
    result.trials = trials;

    std::vector<std::size_t> indices(static_cast<std::size_t>(m_total));
    std::int64_t t05 = 0, t01 = 0, b95 = 0, b99 = 0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        // Partial Fisher-Yates: the first `holdout` entries become the target.
        std::iota(indices.begin(), indices.end(), std::size_t{0});
        for (std::int64_t i = 0; i < holdout; ++i) {
            const std::int64_t j = rng.uniform_int(i, m_total - 1);
            std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
        }
        double target_sum = 0.0;
        double target_n = 0.0;
        for (std::int64_t i = 0; i < holdout; ++i) {
            const auto g = indices[static_cast<std::size_t>(i)];
            target_sum += gs.sum[g];
            target_n += gs.count[g];
        }
        const double target = target_sum / target_n;
        const std::vector<std::size_t> remainder(indices.begin() + holdout, indices.end());

        const BootstrapReport report =
            bootstrap_from_indices(gs, remainder, samples, draw_size, rng);
        if (!report.ci95.contains(target)) ++b95;
        if (!report.ci99.contains(target)) ++b99;

        // One comparison sample of draw_size mixtures for the t-test baseline.
        std::vector<double> comparison;
        const auto rem_size = static_cast<std::int64_t>(remainder.size());
        for (std::int64_t d = 0; d < draw_size; ++d) {
            const auto pick =
                remainder[static_cast<std::size_t>(rng.uniform_int(0, rem_size - 1))];
            const auto& g = sample.groups[pick];
            comparison.insert(comparison.end(), g.begin(), g.end());
        }
        const double p = one_sample_t_test(comparison, target);
        if (p < 0.05) ++t05;
        if (p < 0.01) ++t01;
    }

    const auto denom = static_cast<double>(trials);
    result.t_reject_05 = t05 / denom;
    result.t_reject_01 = t01 / denom;
    result.boot_reject_95 = b95 / denom;
    result.boot_reject_99 = b99 / denom;
    return result;
}

} // namespace fragsim
