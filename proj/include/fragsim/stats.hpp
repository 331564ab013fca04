#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fragsim/metrics.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

// Per-mixture groups of per-run metric values. The resampling unit is the
// mixture, never the individual run.
struct MixtureGroupedSample {
    std::vector<std::vector<double>> groups;

    std::int64_t mixture_count() const { return static_cast<std::int64_t>(groups.size()); }
    std::int64_t run_count() const;
    double overall_mean() const;
};

// Groups one experiment's result rows by mixture index. metric is
// "zi_surplus" or "la_surplus".
MixtureGroupedSample group_by_mixture(const std::vector<RunResult>& rows,
                                      const std::string& metric);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct BootstrapReport {
    std::vector<double> means;  // one mean per bootstrap sample
    double mean_of_means = 0.0;
    double se = 0.0;
    Interval ci95;
    Interval ci99;
    std::int64_t draw_size = 0;
};

// Draws `samples` bootstrap samples of `draw_size` mixtures (with
// replacement); each bootstrap mean averages over all runs of the drawn
// mixtures. Percentile intervals use nearest-rank indices ceil(a/2*B) and
// ceil((1-a/2)*B) on the sorted means.
BootstrapReport bootstrap_ci(const MixtureGroupedSample& sample, std::int64_t samples,
                             std::int64_t draw_size, Rng& rng);

// Nearest-rank percentile interval at the given confidence level.
Interval percentile_interval(const std::vector<double>& sorted_means, double level);

struct AlignmentDecision {
    bool accept95 = false;
    bool accept99 = false;
    Interval diff95;  // CI shifted by -target; contains zero iff accepted
    Interval diff99;
};

// Accepts at a level iff the target lies inside the (closed) percentile
// interval of that level.
AlignmentDecision alignment_test(const BootstrapReport& report, double target);

// Two-sided one-sample t test of mean == target. Zero variance degenerates
// to p = 1 when the mean equals the target and p = 0 otherwise.
double one_sample_t_test(const std::vector<double>& values, double target);

// Regularized incomplete beta I_x(a, b); exposed for verification.
double regularized_incomplete_beta(double a, double b, double x);

struct SelfAlignmentResult {
    std::int64_t trials = 0;
    double t_reject_05 = 0.0;
    double t_reject_01 = 0.0;
    double boot_reject_95 = 0.0;
    double boot_reject_99 = 0.0;
};

// Repeated self-test: hold out `holdout` mixtures for the target mean, then
// test the remainder against it with the bootstrap-CI rule (and the t-test
// baseline on one resampled comparison sample). Returns rejection rates.
SelfAlignmentResult self_alignment_experiment(const MixtureGroupedSample& sample,
                                              std::int64_t trials, std::int64_t holdout,
                                              std::int64_t draw_size, std::int64_t samples,
                                              Rng& rng);

} // namespace fragsim
