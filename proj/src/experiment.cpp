#include "fragsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fragsim/io.hpp"

namespace fragsim {

std::string layout_name(MarketLayout layout) {
    switch (layout) {
        case MarketLayout::Cda: return "cda";
        case MarketLayout::TwoMarket: return "2m";
        case MarketLayout::TwoMarketLa: return "2m-la";
    }
    return "cda";
}

MarketLayout layout_from_name(const std::string& name) {
    if (name == "cda") return MarketLayout::Cda;
    if (name == "2m") return MarketLayout::TwoMarket;
    if (name == "2m-la") return MarketLayout::TwoMarketLa;
    throw std::invalid_argument("unknown market config '" + name + "' (cda|2m|2m-la)");
}

std::string variant_name(GreedyVariant variant) {
    switch (variant) {
        case GreedyVariant::BestGuess: return "bestguess";
        case GreedyVariant::MarketSim: return "marketsim";
        case GreedyVariant::MarketSimRoutingBug: return "marketsim-bug";
    }
    return "bestguess";
}

GreedyVariant variant_from_name(const std::string& name) {
    if (name == "bestguess") return GreedyVariant::BestGuess;
    if (name == "marketsim") return GreedyVariant::MarketSim;
    if (name == "marketsim-bug") return GreedyVariant::MarketSimRoutingBug;
    throw std::invalid_argument("unknown variant '" + name +
                                "' (bestguess|marketsim|marketsim-bug)");
}

ExperimentSpec spec_for_builtin(const std::string& experiment_id) {
    const ExperimentCell* cell = find_experiment(experiment_id);
    if (!cell) throw std::invalid_argument("unknown experiment id '" + experiment_id + "'");
    ExperimentSpec spec;
    spec.experiment_id = cell->id;
    spec.environment = environment(cell->env);
    spec.layout = cell->layout;
    spec.latency = cell->latency;
    spec.profile = cell->profile;
    return spec;
}

SimParams sim_params_for(const ExperimentSpec& spec) {
    SimParams params;
    params.exchange_count = spec.layout == MarketLayout::Cda ? 1 : 2;
    params.with_la = spec.layout == MarketLayout::TwoMarketLa;
    params.sip_latency = spec.layout == MarketLayout::Cda ? 0 : spec.latency;
    params.horizon = spec.environment.horizon;
    params.arrival_rate = spec.environment.arrival_rate;
    params.fundamental_mean = spec.fundamental_mean;
    params.reversion = spec.environment.reversion;
    params.shock_variance = spec.shock_variance;
    params.pv_variance = spec.pv_variance;
    params.la_alpha = spec.la_alpha;
    params.max_position = spec.max_position;
    params.variant = spec.variant;
    params.exec_time_zi_only = spec.exec_time_zi_only;
    return params;
}

namespace {
constexpr std::uint64_t kMixtureStreamTag = 0x6d697874;  // "mixt"
constexpr std::uint64_t kRunStreamTag = 0x72756e73;      // "runs"
} // namespace

std::uint64_t mixture_seed(std::uint64_t master, std::int64_t mixture_index) {
    return derive_seed(master, kMixtureStreamTag, static_cast<std::uint64_t>(mixture_index));
}

std::uint64_t run_seed(std::uint64_t master, std::int64_t mixture_index, std::int64_t run_index) {
    return derive_seed(master, kRunStreamTag, static_cast<std::uint64_t>(mixture_index),
                       static_cast<std::uint64_t>(run_index));
}

std::vector<int> sample_mixture(const StrategyProfile& profile, std::int64_t count, Rng& rng) {
    double total = 0.0;
    for (double w : profile.weights) {
        if (w < 0.0) throw std::invalid_argument("negative profile weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("profile has no positive weight");

    std::vector<int> mixture;
    mixture.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const double u = rng.uniform01() * total;
        double cum = 0.0;
        int pick = static_cast<int>(kStrategyCount) - 1;
        for (std::size_t k = 0; k < kStrategyCount; ++k) {
            cum += profile.weights[k];
            if (u < cum) {
                pick = static_cast<int>(k);
                break;
            }
        }
        mixture.push_back(pick);
    }
    return mixture;
}

std::vector<ZiStrategy> strategies_for_mixture(const std::vector<int>& mixture) {
    const auto& table = strategy_table();
    std::vector<ZiStrategy> strategies;
    strategies.reserve(mixture.size());
    for (int row : mixture) strategies.push_back(table.at(static_cast<std::size_t>(row)));
    return strategies;
}

namespace {

RunResult finish_row(const ExperimentSpec& spec, std::int64_t mixture_index,
                     std::int64_t run_index, std::uint64_t seed, RunResult result) {
    result.experiment_id = spec.experiment_id;
    result.env = spec.environment.id;
    result.config = layout_name(spec.layout);
    result.latency = spec.layout == MarketLayout::Cda ? 0 : spec.latency;
    result.mixture_index = mixture_index;
    result.run_index = run_index;
    result.seed = seed;
    return result;
}

} // namespace

RunResult run_cell(const ExperimentSpec& spec, std::int64_t mixture_index,
                   std::int64_t run_index) {
    Rng mix_rng(mixture_seed(spec.master_seed, mixture_index));
    const auto mixture = sample_mixture(spec.profile, spec.environment.zi_count, mix_rng);
    const auto strategies = strategies_for_mixture(mixture);
    const std::uint64_t seed = run_seed(spec.master_seed, mixture_index, run_index);
    return finish_row(spec, mixture_index, run_index, seed,
                      run_simulation(sim_params_for(spec), strategies, seed));
}

std::vector<RunResult> run_experiment(
    const ExperimentSpec& spec, int jobs,
    const std::set<std::pair<std::int64_t, std::int64_t>>* done,
    const std::function<void(std::int64_t, std::int64_t)>& progress) {
    const std::int64_t total = spec.mixtures * spec.runs_per_mixture;

    std::vector<std::pair<std::int64_t, std::int64_t>> cells;
    cells.reserve(static_cast<std::size_t>(total));
    for (std::int64_t m = 0; m < spec.mixtures; ++m)
        for (std::int64_t r = 0; r < spec.runs_per_mixture; ++r)
            if (!done || done->count({m, r}) == 0) cells.emplace_back(m, r);

    // Mixtures are regenerated per worker from their own seed stream, so the
    // strategy vectors are shared read-only here.
    std::vector<std::vector<ZiStrategy>> mixture_strategies(
        static_cast<std::size_t>(spec.mixtures));
    for (std::int64_t m = 0; m < spec.mixtures; ++m) {
        Rng mix_rng(mixture_seed(spec.master_seed, m));
        mixture_strategies[static_cast<std::size_t>(m)] = strategies_for_mixture(
            sample_mixture(spec.profile, spec.environment.zi_count, mix_rng));
    }

    const SimParams params = sim_params_for(spec);
    std::vector<RunResult> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::int64_t> completed{0};
    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&]() {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const auto [m, r] = cells[idx];
            try {
                const std::uint64_t seed = run_seed(spec.master_seed, m, r);
                rows[idx] = finish_row(
                    spec, m, r, seed,
                    run_simulation(params, mixture_strategies[static_cast<std::size_t>(m)], seed));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty())
                    first_error = "mixture " + std::to_string(m) + " run " + std::to_string(r) +
                                  ": " + e.what();
                return;
            }
            const std::int64_t done_now = completed.fetch_add(1) + 1;
            if (progress) progress(done_now, static_cast<std::int64_t>(cells.size()));
        }
    };

    const int thread_count = std::max(1, jobs);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);

    std::sort(rows.begin(), rows.end(), [](const RunResult& a, const RunResult& b) {
        return std::make_pair(a.mixture_index, a.run_index) <
               std::make_pair(b.mixture_index, b.run_index);
    });
    return rows;
}

ExperimentOutcome execute_experiment(const ExperimentSpec& spec, int jobs,
                                     std::ostream* progress_log) {
    if (spec.output_path.empty())
        throw std::invalid_argument("experiment spec has no output path");

    ExperimentOutcome outcome;
    outcome.results_path = spec.output_path;
    outcome.manifest_path = spec.output_path + ".manifest.json";

    std::vector<RunResult> existing;
    std::set<std::pair<std::int64_t, std::int64_t>> done;
    if (std::filesystem::exists(spec.output_path)) {
        const std::string conflict = manifest_conflict(outcome.manifest_path, spec);
        if (!conflict.empty()) throw std::runtime_error(conflict);
        existing = read_results_csv(spec.output_path);
        for (const RunResult& row : existing) done.insert({row.mixture_index, row.run_index});
    }
    outcome.resumed = static_cast<std::int64_t>(existing.size());

    const std::int64_t total = spec.mixtures * spec.runs_per_mixture;
    if (static_cast<std::int64_t>(done.size()) >= total) {
        if (progress_log)
            *progress_log << "all " << total << " runs already present; nothing to do\n";
        outcome.computed = 0;
        return outcome;
    }

    std::function<void(std::int64_t, std::int64_t)> progress;
    if (progress_log) {
        const std::int64_t stride = std::max<std::int64_t>(1, (total - done.size()) / 20);
        progress = [progress_log, stride](std::int64_t done_now, std::int64_t todo) {
            if (done_now % stride == 0 || done_now == todo)
                *progress_log << "completed " << done_now << "/" << todo << " runs\n";
        };
    }

    auto fresh = run_experiment(spec, jobs, done.empty() ? nullptr : &done, progress);
    outcome.computed = static_cast<std::int64_t>(fresh.size());

    std::vector<RunResult> all = std::move(existing);
    all.insert(all.end(), fresh.begin(), fresh.end());
    std::sort(all.begin(), all.end(), [](const RunResult& a, const RunResult& b) {
        return std::make_pair(a.mixture_index, a.run_index) <
               std::make_pair(b.mixture_index, b.run_index);
    });

    const auto parent = std::filesystem::path(spec.output_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_results_csv(spec.output_path, all);
    write_manifest(outcome.manifest_path, spec, static_cast<std::int64_t>(all.size()));
    return outcome;
}

} // namespace fragsim
