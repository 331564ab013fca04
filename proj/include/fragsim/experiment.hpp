#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fragsim/metrics.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/simulation.hpp"
#include "fragsim/traders.hpp"

namespace fragsim {

inline constexpr std::size_t kStrategyCount = 11;

// Market environment: trader population, arrival rate, reversion, horizon.
struct Environment {
    int id = 0;  // 0 for custom parameter sets
    std::int64_t zi_count = 0;
    double arrival_rate = 0.0;
    double reversion = 0.0;
    Time horizon = 0;
};

enum class MarketLayout { Cda, TwoMarket, TwoMarketLa };

std::string layout_name(MarketLayout layout);
MarketLayout layout_from_name(const std::string& name);

std::string variant_name(GreedyVariant variant);
GreedyVariant variant_from_name(const std::string& name);

// Probability vector over the strategy table rows.
struct StrategyProfile {
    std::array<double, kStrategyCount> weights{};
};

// One experiment: environment + market layout + latency + sampling profile.
struct ExperimentCell {
    std::string id;
    int env = 0;
    MarketLayout layout = MarketLayout::Cda;
    Time latency = 0;
    StrategyProfile profile;
};

// Built-in tables. Profiles are normalized at load; a row whose printed
// weights do not sum to one is renormalized with a warning on stderr.
const std::vector<Environment>& environments();
const Environment& environment(int id);
const std::vector<ZiStrategy>& strategy_table();
const std::vector<ExperimentCell>& builtin_experiments();
const ExperimentCell* find_experiment(const std::string& id);

// FNV-1a over the canonical rendering of the built-in profile table; guards
// against transcription drift.
std::uint64_t profile_table_checksum();

// Full specification of an experiment batch: M mixtures x R runs.
struct ExperimentSpec {
    std::string experiment_id;
    Environment environment;
    MarketLayout layout = MarketLayout::Cda;
    Time latency = 0;
    StrategyProfile profile;
    GreedyVariant variant = GreedyVariant::BestGuess;
    std::int64_t mixtures = 1;
    std::int64_t runs_per_mixture = 1;
    std::uint64_t master_seed = 0;
    bool exec_time_zi_only = false;
    double fundamental_mean = 100000.0;
    double shock_variance = 5'000'000.0;
    double pv_variance = 5'000'000.0;
    double la_alpha = 0.001;
    std::int64_t max_position = 10;
    std::string output_path;
};

// Builds a spec for a built-in experiment id with WW-scale defaults left to
// the caller (M, R, seed, output).
ExperimentSpec spec_for_builtin(const std::string& experiment_id);

SimParams sim_params_for(const ExperimentSpec& spec);

// Seed streams: mixture sampling is keyed by (master, mixture) only, so
// changing R never changes the mixtures; each run's stream is keyed by
// (master, mixture, run) and reproducible in isolation.
std::uint64_t mixture_seed(std::uint64_t master, std::int64_t mixture_index);
std::uint64_t run_seed(std::uint64_t master, std::int64_t mixture_index, std::int64_t run_index);

// N independent categorical draws from the profile. Throws on a profile
// with no positive weight.
std::vector<int> sample_mixture(const StrategyProfile& profile, std::int64_t count, Rng& rng);

std::vector<ZiStrategy> strategies_for_mixture(const std::vector<int>& mixture);

// Runs one (mixture, run) cell of the spec.
RunResult run_cell(const ExperimentSpec& spec, std::int64_t mixture_index, std::int64_t run_index);

// Runs every cell not in `done`, on `jobs` worker threads. Rows come back
// sorted by (mixture, run); results are identical for any jobs value.
std::vector<RunResult> run_experiment(
    const ExperimentSpec& spec, int jobs,
    const std::set<std::pair<std::int64_t, std::int64_t>>* done = nullptr,
    const std::function<void(std::int64_t, std::int64_t)>& progress = {});

// End-to-end batch with persistence: resumes from an existing results file
// (refusing on a manifest mismatch), computes missing cells, writes the
// sorted results CSV and its manifest.
struct ExperimentOutcome {
    std::int64_t computed = 0;
    std::int64_t resumed = 0;
    std::string results_path;
    std::string manifest_path;
};
ExperimentOutcome execute_experiment(const ExperimentSpec& spec, int jobs,
                                     std::ostream* progress_log = nullptr);

} // namespace fragsim
