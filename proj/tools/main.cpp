#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fragsim/experiment.hpp"
#include "fragsim/io.hpp"
#include "fragsim/simulation.hpp"
#include "fragsim/stats.hpp"

namespace {

using namespace fragsim;

constexpr int kExitOk = 0;
constexpr int kExitGateRejected = 1;
constexpr int kExitUsage = 2;

struct RunOptions {
    std::string experiment;
    int env = 0;
    std::string config = "cda";
    Time latency = 0;
    std::string variant = "bestguess";
    std::uint64_t seed = 0;
    std::string mixture;  // comma-separated 1-based strategy rows
    std::string exec_time = "all";
    std::string event_trace, order_log, nbbo_log, fundamental_log, trader_log;
};

std::vector<int> parse_mixture(const std::string& text) {
    std::vector<int> rows;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const int row = std::stoi(item);
        if (row < 1 || row > static_cast<int>(kStrategyCount))
            throw std::invalid_argument("mixture entries must name strategy rows 1..11");
        rows.push_back(row - 1);
    }
    return rows;
}

ExperimentSpec spec_from_run_options(const RunOptions& opt) {
    ExperimentSpec spec;
    if (!opt.experiment.empty()) {
        spec = spec_for_builtin(opt.experiment);
    } else {
        if (opt.env == 0)
            throw std::invalid_argument("either --experiment or --env is required");
        spec.environment = environment(opt.env);
        spec.layout = layout_from_name(opt.config);
        spec.latency = spec.layout == MarketLayout::Cda ? 0 : opt.latency;
        std::string id = "env" + std::to_string(opt.env) + "-";
        if (spec.layout == MarketLayout::Cda)
            id += "cda";
        else if (spec.layout == MarketLayout::TwoMarket)
            id += spec.latency == 0 ? "2m-d0" : ("2mnola-d" + std::to_string(spec.latency));
        else
            id += "2mla-d" + std::to_string(spec.latency);
        spec.experiment_id = id;
        if (const ExperimentCell* cell = find_experiment(id)) spec.profile = cell->profile;
    }
    spec.variant = variant_from_name(opt.variant);
    spec.master_seed = opt.seed;
    spec.exec_time_zi_only = opt.exec_time == "zi-only";
    return spec;
}

int cmd_run(const RunOptions& opt) {
    const ExperimentSpec spec = spec_from_run_options(opt);

    std::vector<ZiStrategy> strategies;
    if (!opt.mixture.empty()) {
        const auto rows = parse_mixture(opt.mixture);
        if (static_cast<std::int64_t>(rows.size()) != spec.environment.zi_count)
            throw std::invalid_argument(
                "mixture must list exactly " + std::to_string(spec.environment.zi_count) +
                " entries for this environment");
        strategies = strategies_for_mixture(rows);
    } else {
        double sum = 0.0;
        for (double w : spec.profile.weights) sum += w;
        if (sum <= 0.0)
            throw std::invalid_argument(
                "no built-in profile for this experiment; pass --mixture");
        Rng mix_rng(mixture_seed(spec.master_seed, 0));
        strategies = strategies_for_mixture(
            sample_mixture(spec.profile, spec.environment.zi_count, mix_rng));
    }

    Simulation sim(sim_params_for(spec), strategies, run_seed(spec.master_seed, 0, 0));

    std::ofstream event_trace, order_log, nbbo_log;
    if (!opt.event_trace.empty()) {
        event_trace.open(opt.event_trace, std::ios::trunc);
        sim.set_event_trace(&event_trace);
    }
    if (!opt.order_log.empty()) {
        order_log.open(opt.order_log, std::ios::trunc);
        sim.set_order_log(&order_log);
    }
    if (!opt.nbbo_log.empty()) {
        nbbo_log.open(opt.nbbo_log, std::ios::trunc);
        sim.set_nbbo_log(&nbbo_log);
    }

    sim.run();
    RunResult row = sim.collect();
    row.experiment_id = spec.experiment_id;
    row.env = spec.environment.id;
    row.config = layout_name(spec.layout);
    row.latency = spec.layout == MarketLayout::Cda ? 0 : spec.latency;
    row.seed = run_seed(spec.master_seed, 0, 0);

    if (!opt.fundamental_log.empty()) {
        std::ofstream out(opt.fundamental_log, std::ios::trunc);
        out << "t,value\n";
        for (Time t = 0; t <= spec.environment.horizon; ++t)
            out << t << ',' << format_double(sim.fundamental().raw(t)) << '\n';
    }
    if (!opt.trader_log.empty()) {
        std::ofstream out(opt.trader_log, std::ios::trunc);
        out << "trader_id,type,shade_min,shade_max,take_fraction,position,cash,surplus,"
               "transactions\n";
        const double terminal = sim.fundamental().raw(spec.environment.horizon);
        for (const ZiTrader& t : sim.traders()) {
            out << t.id() << ",zi," << t.strategy().shade_min << ',' << t.strategy().shade_max
                << ',' << format_double(t.strategy().take_fraction) << ',' << t.position() << ','
                << t.cash() << ',' << format_double(t.terminal_surplus(terminal)) << ','
                << t.transactions() << '\n';
        }
        if (const LaTrader* la = sim.la()) {
            out << la->id() << ",la,,,," << la->position() << ',' << la->cash() << ','
                << la->cash() << ',' << la->transactions() << '\n';
        }
    }

    std::cout << kResultsHeader << '\n' << result_row_csv(row) << '\n';
    return kExitOk;
}

struct ExperimentOptions {
    std::string config_path;
    std::string experiment;
    std::int64_t mixtures = 0;
    std::int64_t runs = 0;
    std::string out_dir;
    std::string output;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    std::string variant;
    std::string exec_time;
    bool quiet = false;
};

int cmd_experiment(const ExperimentOptions& opt) {
    ExperimentSpec spec;
    if (!opt.config_path.empty()) {
        spec = load_spec_file(opt.config_path);
    } else if (!opt.experiment.empty()) {
        spec = spec_for_builtin(opt.experiment);
        if (opt.mixtures > 0) spec.mixtures = opt.mixtures;
        if (opt.runs > 0) spec.runs_per_mixture = opt.runs;
    } else {
        throw std::invalid_argument("either --config or --experiment is required");
    }
    if (opt.mixtures > 0) spec.mixtures = opt.mixtures;
    if (opt.runs > 0) spec.runs_per_mixture = opt.runs;
    if (opt.seed) spec.master_seed = *opt.seed;
    if (!opt.variant.empty()) spec.variant = variant_from_name(opt.variant);
    if (!opt.exec_time.empty()) spec.exec_time_zi_only = opt.exec_time == "zi-only";
    if (!opt.output.empty()) spec.output_path = opt.output;
    if (spec.output_path.empty())
        spec.output_path = spec.experiment_id + "-" + variant_name(spec.variant) + ".csv";
    if (!opt.out_dir.empty())
        spec.output_path =
            (std::filesystem::path(opt.out_dir) / std::filesystem::path(spec.output_path).filename())
                .string();

    const ExperimentOutcome outcome =
        execute_experiment(spec, opt.jobs, opt.quiet ? nullptr : &std::cerr);
    std::cerr << "wrote " << outcome.results_path << " (" << outcome.computed << " new, "
              << outcome.resumed << " resumed)\n";
    return kExitOk;
}

struct AlignOptions {
    std::vector<std::string> results;
    std::string targets;
    std::string out;
    std::int64_t bootstrap = 1000;
    std::int64_t draw_size = 0;  // 0: min(500, mixture count)
    std::uint64_t seed = 1;
    bool gate = false;
};

int cmd_align(const AlignOptions& opt) {
    std::vector<RunResult> rows;
    for (const std::string& path : opt.results) {
        auto part = read_results_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto targets = read_targets_csv(opt.targets);

    std::map<std::string, std::vector<RunResult>> by_experiment;
    for (RunResult& row : rows) by_experiment[row.experiment_id].push_back(std::move(row));

    std::ostringstream report;
    report << "experiment_id,metric,target,boot_mean,boot_se,ci95_lo,ci95_hi,diff95_lo,"
              "diff95_hi,diff99_lo,diff99_hi,accept95,accept99\n";
    bool any_rejected = false;
    for (const auto& [experiment_id, experiment_rows] : by_experiment) {
        bool matched = false;
        for (const TargetEntry& target : targets) {
            if (target.experiment_id != experiment_id) continue;
            matched = true;
            const auto sample = group_by_mixture(experiment_rows, target.metric);
            std::int64_t draw = opt.draw_size;
            if (draw == 0) draw = std::min<std::int64_t>(500, sample.mixture_count());
            Rng rng(derive_seed(opt.seed, std::hash<std::string>{}(experiment_id),
                                std::hash<std::string>{}(target.metric)));
            const auto boot = bootstrap_ci(sample, opt.bootstrap, draw, rng);
            const auto decision = alignment_test(boot, target.target);
            if (!decision.accept95) any_rejected = true;
            report << experiment_id << ',' << target.metric << ','
                   << format_double(target.target) << ',' << format_double(boot.mean_of_means)
                   << ',' << format_double(boot.se) << ',' << format_double(boot.ci95.lo) << ','
                   << format_double(boot.ci95.hi) << ',' << format_double(decision.diff95.lo)
                   << ',' << format_double(decision.diff95.hi) << ','
                   << format_double(decision.diff99.lo) << ',' << format_double(decision.diff99.hi)
                   << ',' << (decision.accept95 ? 1 : 0) << ',' << (decision.accept99 ? 1 : 0)
                   << '\n';
        }
        if (!matched)
            std::cerr << "warning: no target for experiment " << experiment_id << "; skipped\n";
    }

    if (opt.out.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream out(opt.out, std::ios::trunc);
        out << report.str();
    }
    if (opt.gate && any_rejected) return kExitGateRejected;
    return kExitOk;
}

struct SelftestOptions {
    std::string results;
    std::string metric = "zi_surplus";
    std::int64_t trials = 1000;
    std::int64_t holdout = 500;
    std::int64_t draw_size = 500;
    std::int64_t bootstrap = 1000;
    std::uint64_t seed = 1;
};

int cmd_selftest(const SelftestOptions& opt) {
    const auto rows = read_results_csv(opt.results);
    const auto sample = group_by_mixture(rows, opt.metric);
    if (sample.mixture_count() < opt.holdout + opt.draw_size) {
        std::cerr << "error: need at least " << (opt.holdout + opt.draw_size)
                  << " mixtures, results hold " << sample.mixture_count() << "\n";
        return kExitUsage;
    }
    Rng rng(opt.seed);
    const auto result = self_alignment_experiment(sample, opt.trials, opt.holdout, opt.draw_size,
                                                  opt.bootstrap, rng);
    std::cout << "method,level,rejection_rate,trials\n";
    std::cout << "t-test,0.05," << format_double(result.t_reject_05) << ',' << result.trials << '\n';
    std::cout << "t-test,0.01," << format_double(result.t_reject_01) << ',' << result.trials << '\n';
    std::cout << "bootstrap,0.95," << format_double(result.boot_reject_95) << ',' << result.trials
              << '\n';
    std::cout << "bootstrap,0.99," << format_double(result.boot_reject_99) << ',' << result.trials
              << '\n';
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out_path) {
    std::vector<RunResult> rows;
    for (const std::string& path : paths) {
        auto part = read_results_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    struct Key {
        std::string experiment_id, config;
        int env;
        Time latency;
        bool operator<(const Key& o) const {
            return std::tie(experiment_id, env, config, latency) <
                   std::tie(o.experiment_id, o.env, o.config, o.latency);
        }
    };
    struct Acc {
        double sum = 0.0;
        std::int64_t n = 0;
        void add(double v) {
            sum += v;
            ++n;
        }
    };
    std::map<Key, std::map<std::string, Acc>> table;
    for (const RunResult& row : rows) {
        auto& metrics = table[Key{row.experiment_id, row.config, row.env, row.latency}];
        metrics["zi_surplus"].add(row.zi_surplus);
        metrics["la_surplus"].add(row.la_surplus);
        if (row.nbbo_spread_median) metrics["nbbo_spread_median"].add(*row.nbbo_spread_median);
        if (row.bbo_spread_mean_median)
            metrics["bbo_spread_mean_median"].add(*row.bbo_spread_mean_median);
        if (row.exec_time_mean) metrics["exec_time_mean"].add(*row.exec_time_mean);
        metrics["zi_tx"].add(static_cast<double>(row.zi_transactions));
        metrics["la_tx"].add(static_cast<double>(row.la_transactions));
    }

    std::ostringstream report;
    report << "experiment_id,env,config,latency,metric,mean,runs\n";
    for (const auto& [key, metrics] : table) {
        for (const auto& [metric, acc] : metrics) {
            report << key.experiment_id << ',' << key.env << ',' << key.config << ','
                   << key.latency << ',' << metric << ','
                   << format_double(acc.sum / static_cast<double>(acc.n)) << ',' << acc.n << '\n';
        }
    }
    if (out_path.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        out << report.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fragsim: fragmented two-exchange market simulator and replication toolkit"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "execute a single simulation run");
    run->add_option("--experiment", run_opt.experiment, "built-in experiment id, e.g. env3-cda");
    run->add_option("--env", run_opt.env, "environment id (1, 2 or 3)");
    run->add_option("--config", run_opt.config, "market configuration (cda|2m|2m-la)");
    run->add_option("--latency", run_opt.latency, "SIP latency in ticks");
    run->add_option("--variant", run_opt.variant, "bestguess|marketsim|marketsim-bug");
    run->add_option("--seed", run_opt.seed, "master seed");
    run->add_option("--mixture", run_opt.mixture, "inline strategy rows, e.g. 9,10,9,...");
    run->add_option("--metrics-exec-time", run_opt.exec_time, "all|zi-only")
        ->check(CLI::IsMember({"all", "zi-only"}));
    run->add_option("--event-trace", run_opt.event_trace, "write dispatch trace to file");
    run->add_option("--order-log", run_opt.order_log, "write order/trade CSV to file");
    run->add_option("--nbbo-log", run_opt.nbbo_log, "write NBBO trace CSV to file");
    run->add_option("--fundamental-log", run_opt.fundamental_log, "dump fundamental series CSV");
    run->add_option("--trader-log", run_opt.trader_log, "write per-trader terminal records CSV");

    ExperimentOptions exp_opt;
    CLI::App* exp = app.add_subcommand("experiment", "run an M x R experiment batch");
    exp->add_option("--config", exp_opt.config_path, "experiment spec JSON file");
    exp->add_option("--experiment", exp_opt.experiment, "built-in experiment id");
    exp->add_option("--mixtures,-M", exp_opt.mixtures, "number of mixtures");
    exp->add_option("--runs,-R", exp_opt.runs, "runs per mixture");
    exp->add_option("--out", exp_opt.out_dir, "output directory");
    exp->add_option("--output", exp_opt.output, "output results file");
    exp->add_option("--jobs", exp_opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    std::uint64_t exp_seed = 0;
    CLI::Option* exp_seed_opt = exp->add_option("--seed", exp_seed, "master seed override");
    exp->add_option("--variant", exp_opt.variant, "variant override");
    exp->add_option("--metrics-exec-time", exp_opt.exec_time, "all|zi-only")
        ->check(CLI::IsMember({"all", "zi-only", ""}));
    exp->add_flag("--quiet", exp_opt.quiet, "suppress progress output");

    AlignOptions align_opt;
    CLI::App* align = app.add_subcommand("align", "bootstrap alignment test against target means");
    align->add_option("--results", align_opt.results, "results CSV file(s)")->required();
    align->add_option("--targets", align_opt.targets, "targets CSV (experiment_id,metric,target)")
        ->required();
    align->add_option("--out", align_opt.out, "write report here instead of stdout");
    align->add_option("--bootstrap", align_opt.bootstrap, "bootstrap samples (default 1000)");
    align->add_option("--draw-size", align_opt.draw_size,
                      "mixtures per bootstrap sample (default min(500, available))");
    align->add_option("--seed", align_opt.seed, "resampling seed");
    align->add_flag("--gate", align_opt.gate, "exit 1 if any experiment rejects at 95%");

    SelftestOptions self_opt;
    CLI::App* self = app.add_subcommand("selftest", "self-alignment false-rejection experiment");
    self->add_option("--results", self_opt.results, "results CSV file")->required();
    self->add_option("--metric", self_opt.metric, "metric column (default zi_surplus)");
    self->add_option("--trials", self_opt.trials, "number of trials");
    self->add_option("--holdout", self_opt.holdout, "mixtures held out for the target mean");
    self->add_option("--draw-size", self_opt.draw_size, "mixtures per comparison sample");
    self->add_option("--bootstrap", self_opt.bootstrap, "bootstrap samples per trial");
    self->add_option("--seed", self_opt.seed, "trial seed");

    std::vector<std::string> report_paths;
    std::string report_out;
    CLI::App* report = app.add_subcommand("report", "aggregate results into a plot-ready table");
    report->add_option("results", report_paths, "results CSV file(s)")->required();
    report->add_option("--out", report_out, "write table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) return cmd_run(run_opt);
        if (*exp) {
            if (exp_seed_opt->count() > 0) exp_opt.seed = exp_seed;
            return cmd_experiment(exp_opt);
        }
        if (*align) return cmd_align(align_opt);
        if (*self) return cmd_selftest(self_opt);
        if (*report) return cmd_report(report_paths, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
