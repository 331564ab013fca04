// Acceptance suite: exercises the replication-level criteria end to end and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fragsim/experiment.hpp"
#include "fragsim/io.hpp"
#include "fragsim/simulation.hpp"
#include "fragsim/stats.hpp"

#include "../naive_book_oracle.hpp"

using namespace fragsim;

namespace {

int g_failures = 0;

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", passed ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

long elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0)
        .count();
}

int jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<RunResult> run_batch(const std::string& experiment_id, GreedyVariant variant,
                                 std::int64_t mixtures, std::int64_t runs, std::uint64_t seed) {
    ExperimentSpec spec = spec_for_builtin(experiment_id);
    spec.variant = variant;
    spec.mixtures = mixtures;
    spec.runs_per_mixture = runs;
    spec.master_seed = seed;
    return run_experiment(spec, jobs());
}

double mean_of(const std::vector<RunResult>& rows, double RunResult::* field) {
    double sum = 0.0;
    for (const RunResult& row : rows) sum += row.*field;
    return sum / static_cast<double>(rows.size());
}

// --- criteria 1 and 2: consolidated-market surplus reproduction ------------

void surplus_reproduction(int criterion, const std::string& experiment_id, double target,
                          double se, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_batch(experiment_id, GreedyVariant::BestGuess, 500, 100, seed);
    const double mean = mean_of(rows, &RunResult::zi_surplus);
    const double margin = 3.0 * se;
    std::ostringstream detail;
    detail << experiment_id << " mean ZI surplus " << mean << " vs " << target << " +/- " << margin
           << " (" << rows.size() << " runs, " << elapsed_s(t0) << "s)";
    report(criterion, std::fabs(mean - target) <= margin, detail.str());
}

// --- criterion 3: variant split of arbitrageur profits ---------------------

void variant_split() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = 1003;
    const auto bg = run_batch("env3-2mla-d25", GreedyVariant::BestGuess, 100, 20, seed);
    const auto ms = run_batch("env3-2mla-d25", GreedyVariant::MarketSim, 100, 20, seed);

    Rng rng_bg(derive_seed(seed, 1));
    Rng rng_ms(derive_seed(seed, 2));
    const auto boot_bg = bootstrap_ci(group_by_mixture(bg, "la_surplus"), 1000, 100, rng_bg);
    const auto boot_ms = bootstrap_ci(group_by_mixture(ms, "la_surplus"), 1000, 100, rng_ms);

    const bool ordered = boot_bg.mean_of_means < boot_ms.mean_of_means;
    const bool separated = boot_bg.ci95.hi < boot_ms.ci95.lo;
    std::ostringstream detail;
    detail << "LA surplus bestguess " << boot_bg.mean_of_means << " CI95 [" << boot_bg.ci95.lo
           << ", " << boot_bg.ci95.hi << "] vs marketsim-greedy " << boot_ms.mean_of_means
           << " CI95 [" << boot_ms.ci95.lo << ", " << boot_ms.ci95.hi << "] (" << elapsed_s(t0)
           << "s)";
    report(3, ordered && separated, detail.str());
}

// --- criterion 4: self-alignment calibration --------------------------------

void self_alignment_calibration() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_batch("env3-cda", GreedyVariant::BestGuess, 1500, 20, 1004);
    const auto sample = group_by_mixture(rows, "zi_surplus");
    Rng rng(2004);
    const auto res = self_alignment_experiment(sample, 200, 250, 250, 500, rng);
    const bool in_band = res.boot_reject_95 >= 0.02 && res.boot_reject_95 <= 0.12;
    const bool t_over_rejects = res.t_reject_05 > res.boot_reject_95;
    std::ostringstream detail;
    detail << "bootstrap-95 rejection " << res.boot_reject_95 * 100.0 << "% (band [2%, 12%]), "
           << "t-test rejection " << res.t_reject_05 * 100.0 << "% (" << elapsed_s(t0) << "s)";
    report(4, in_band && t_over_rejects, detail.str());
}

// --- criterion 5: property suite --------------------------------------------

bool conservation_and_parity(std::ostringstream& why) {
    const char* ids[] = {"env3-cda", "env3-2m-d0", "env3-2mnola-d50", "env3-2mla-d25",
                         "env3-2mla-d100"};
    for (const char* id : ids) {
        ExperimentSpec spec = spec_for_builtin(id);
        spec.master_seed = 1500;
        for (std::int64_t m = 0; m < 5; ++m) {
            Rng mix_rng(mixture_seed(spec.master_seed, m));
            const auto strategies = strategies_for_mixture(
                sample_mixture(spec.profile, spec.environment.zi_count, mix_rng));
            for (std::int64_t r = 0; r < 4; ++r) {
                Simulation sim(sim_params_for(spec), strategies,
                               run_seed(spec.master_seed, m, r));
                sim.run();
                const RunResult result = sim.collect();  // throws on conservation breaks
                std::int64_t cash = 0, position = 0;
                for (const ZiTrader& z : sim.traders()) {
                    cash += z.cash();
                    position += z.position();
                }
                if (const LaTrader* la = sim.la()) {
                    cash += la->cash();
                    position += la->position();
                }
                if (cash != 0 || position != 0) {
                    why << id << " m" << m << " r" << r << ": cash " << cash << " position "
                        << position;
                    return false;
                }
                if (result.zi_transactions + result.la_transactions !=
                        2 * static_cast<std::int64_t>(sim.logs().trades.size()) ||
                    result.la_transactions % 2 != 0) {
                    why << id << " m" << m << " r" << r << ": transaction parity broken";
                    return false;
                }
            }
        }
    }
    return true;
}

bool la_flat_and_profitable(std::ostringstream& why) {
    ExperimentSpec spec = spec_for_builtin("env3-2mla-d25");
    spec.master_seed = 1600;
    std::int64_t active_runs = 0;
    for (std::int64_t m = 0; m < 10; ++m) {
        Rng mix_rng(mixture_seed(spec.master_seed, m));
        const auto strategies = strategies_for_mixture(
            sample_mixture(spec.profile, spec.environment.zi_count, mix_rng));
        for (std::int64_t r = 0; r < 20; ++r) {
            Simulation sim(sim_params_for(spec), strategies, run_seed(spec.master_seed, m, r));
            sim.run();
            const RunResult result = sim.collect();
            const LaTrader* la = sim.la();
            if (la->position() != 0) {
                why << "open arbitrageur position in m" << m << " r" << r;
                return false;
            }
            double expected = 0.0;
            for (const auto& arb : la->arbitrages()) {
                if (static_cast<double>(arb.best_bid - arb.best_ask) <
                    spec.la_alpha * static_cast<double>(arb.best_ask)) {
                    why << "arbitrage below the threshold edge in m" << m << " r" << r;
                    return false;
                }
                expected += static_cast<double>(arb.best_bid - arb.best_ask);
            }
            if (result.la_surplus != expected) {
                why << "arbitrage profits do not add up in m" << m << " r" << r;
                return false;
            }
            if (result.la_transactions > 0) {
                ++active_runs;
                if (!(result.la_surplus > 0.0)) {
                    why << "active arbitrageur without profit in m" << m << " r" << r;
                    return false;
                }
            }
        }
    }
    if (active_runs == 0) {
        why << "no run exercised the arbitrageur";
        return false;
    }
    return true;
}

bool price_time_priority(std::ostringstream& why) {
    Rng rng(1700);
    for (int stream = 0; stream < 100000; ++stream) {
        OrderBook book;
        testing::NaiveBook oracle;
        OrderId next_id = 1;
        for (int i = 0; i < 30; ++i) {
            if (book.open_orders() > 0 && rng.uniform_int(0, 9) == 0) {
                const OrderId victim = static_cast<OrderId>(rng.uniform_int(1, next_id - 1));
                if (book.withdraw(victim) != oracle.withdraw(victim)) {
                    why << "withdraw divergence in stream " << stream;
                    return false;
                }
                continue;
            }
            LimitOrder order;
            order.id = next_id++;
            order.trader = static_cast<TraderId>(order.id);
            order.side = rng.uniform_int(0, 1) == 0 ? Side::Buy : Side::Sell;
            order.price = rng.uniform_int(95, 105);
            const auto got = book.submit(order);
            const auto want = oracle.submit(order);
            if (got.has_value() != want.has_value() ||
                (got && (got->id != want->id || got->price != want->price))) {
                why << "match divergence in stream " << stream << " order " << order.id;
                return false;
            }
        }
    }
    return true;
}

bool determinism_across_parallelism(std::ostringstream& why) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fragsim_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    ExperimentSpec spec = spec_for_builtin("env3-2mla-d50");
    spec.mixtures = 4;
    spec.runs_per_mixture = 3;
    spec.master_seed = 1800;
    spec.output_path = (dir / "serial.csv").string();
    execute_experiment(spec, 1);
    spec.output_path = (dir / "parallel.csv").string();
    execute_experiment(spec, 4);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    const bool same = slurp(dir / "serial.csv") == slurp(dir / "parallel.csv");
    if (!same) why << "results differ between 1 and 4 worker threads";
    fs::remove_all(dir);
    return same;
}

bool single_market_variant_equivalence(std::ostringstream& why) {
    ExperimentSpec spec = spec_for_builtin("env3-cda");
    for (std::uint64_t seed = 1900; seed < 1930; ++seed) {
        spec.master_seed = seed;
        spec.variant = GreedyVariant::BestGuess;
        const RunResult a = run_cell(spec, 0, 0);
        spec.variant = GreedyVariant::MarketSim;
        const RunResult b = run_cell(spec, 0, 0);
        spec.variant = GreedyVariant::MarketSimRoutingBug;
        const RunResult c = run_cell(spec, 0, 0);
        if (result_row_csv(a) != result_row_csv(b) || result_row_csv(a) != result_row_csv(c)) {
            why << "variants diverge in a single-market run, seed " << seed;
            return false;
        }
    }
    return true;
}

bool full_take_fraction_equivalence(std::ostringstream& why) {
    const std::vector<ZiStrategy> strategies(24, ZiStrategy{0, 2500, 1.0});
    for (int config = 0; config < 3; ++config) {
        SimParams params;
        params.exchange_count = config == 0 ? 1 : 2;
        params.with_la = config == 2;
        params.sip_latency = 0;
        params.horizon = 5000;
        params.arrival_rate = 0.005;
        for (std::uint64_t seed = 2000; seed < 2015; ++seed) {
            SimParams off = params;
            off.greedy_enabled = false;
            Simulation with_take(params, strategies, seed);
            with_take.run();
            Simulation without_take(off, strategies, seed);
            without_take.run();
            const auto& a = with_take.logs().trades;
            const auto& b = without_take.logs().trades;
            bool same = a.size() == b.size();
            for (std::size_t i = 0; same && i < a.size(); ++i)
                same = a[i].time == b[i].time && a[i].price == b[i].price &&
                       a[i].buy_order == b[i].buy_order && a[i].sell_order == b[i].sell_order &&
                       a[i].venue == b[i].venue;
            if (!same || result_row_csv(with_take.collect()) !=
                             result_row_csv(without_take.collect())) {
                why << "take-rule equivalence broken (config " << config << ", seed " << seed
                    << ")";
                return false;
            }
        }
    }
    return true;
}

struct NbboOracle : NbboListener {
    const Exchange* a = nullptr;
    const Exchange* b = nullptr;
    std::int64_t checked = 0;
    std::int64_t mismatches = 0;
    void on_nbbo(const NbboQuote& got) override {
        std::optional<Price> bid, ask;
        ExchangeId bid_ex = -1, ask_ex = -1;
        for (const Exchange* ex : {a, b}) {
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
        ++checked;
        if (got.bid != bid || got.ask != ask || got.bid_exchange != bid_ex ||
            got.ask_exchange != ask_ex)
            ++mismatches;
    }
};

bool nbbo_brute_force(std::ostringstream& why) {
    ExperimentSpec spec = spec_for_builtin("env3-2m-d0");
    spec.master_seed = 2100;
    std::int64_t checked = 0;
    for (std::int64_t m = 0; m < 10; ++m) {
        Rng mix_rng(mixture_seed(spec.master_seed, m));
        const auto strategies = strategies_for_mixture(
            sample_mixture(spec.profile, spec.environment.zi_count, mix_rng));
        Simulation sim(sim_params_for(spec), strategies, run_seed(spec.master_seed, m, 0));
        NbboOracle oracle;
        oracle.a = &sim.exchange(0);
        oracle.b = &sim.exchange(1);
        sim.sip().subscribe(&oracle);
        sim.run();
        if (oracle.mismatches != 0) {
            why << oracle.mismatches << " consolidated quotes diverged from brute force";
            return false;
        }
        checked += oracle.checked;
    }
    if (checked == 0) {
        why << "no consolidated publications observed";
        return false;
    }
    return true;
}

void property_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Property {
        const char* name;
        bool (*check)(std::ostringstream&);
    };
    const Property properties[] = {
        {"conservation+parity", conservation_and_parity},
        {"la-flat-profitable", la_flat_and_profitable},
        {"price-time-priority", price_time_priority},
        {"determinism-parallelism", determinism_across_parallelism},
        {"single-market-variant-equivalence", single_market_variant_equivalence},
        {"full-take-fraction-equivalence", full_take_fraction_equivalence},
        {"nbbo-brute-force", nbbo_brute_force},
    };
    int failed = 0;
    std::ostringstream detail;
    for (const Property& property : properties) {
        std::ostringstream why;
        const bool ok = property.check(why);
        if (!ok) {
            ++failed;
            detail << " [" << property.name << ": " << why.str() << "]";
        } else {
            detail << " " << property.name << "=ok";
        }
    }
    std::ostringstream line;
    line << "property suite" << detail.str() << " (" << elapsed_s(t0) << "s)";
    report(5, failed == 0, line.str());
}

// --- criterion 6: statistics oracles ----------------------------------------

// Independent resampler sharing the draw stream and the documented
// accumulation order.
BootstrapReport reference_bootstrap(const MixtureGroupedSample& sample, std::int64_t b,
                                    std::int64_t draw, Rng& rng) {
    BootstrapReport report;
    const auto m = static_cast<std::int64_t>(sample.groups.size());
    for (std::int64_t s = 0; s < b; ++s) {
        double total = 0.0;
        std::int64_t n = 0;
        for (std::int64_t d = 0; d < draw; ++d) {
            const auto g = static_cast<std::size_t>(rng.uniform_int(0, m - 1));
            double group_total = 0.0;
            for (double v : sample.groups[g]) {
                group_total += v;
                ++n;
            }
            total += group_total;
        }
        report.means.push_back(total / static_cast<double>(n));
    }
    std::vector<double> sorted = report.means;
    std::sort(sorted.begin(), sorted.end());
    report.ci95 = percentile_interval(sorted, 0.95);
    report.ci99 = percentile_interval(sorted, 0.99);
    return report;
}

// Closed-form two-sided Student-t tail probability for integer dof
// (trigonometric recursion), independent of the incomplete-beta route.
double reference_t_two_sided(double t, std::int64_t dof) {
    const double theta = std::atan(std::fabs(t) / std::sqrt(static_cast<double>(dof)));
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double a;
    if (dof % 2 == 1) {
        if (dof == 1) {
            a = 2.0 * theta / M_PI;
        } else {
            double term = c;
            double total = c;
            for (std::int64_t k = 2; k <= dof - 3; k += 2) {
                term *= static_cast<double>(k) / static_cast<double>(k + 1) * c * c;
                total += term;
            }
            a = 2.0 / M_PI * (theta + s * total);
        }
    } else {
        double term = 1.0;
        double total = 1.0;
        for (std::int64_t k = 1; k <= dof - 3; k += 2) {
            term *= static_cast<double>(k) / static_cast<double>(k + 1) * c * c;
            total += term;
        }
        a = s * total;
    }
    return 1.0 - a;
}

void stats_oracles() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng data_rng(2200);
    int ci_mismatches = 0;
    double worst_p_gap = 0.0;
    for (int ds = 0; ds < 50; ++ds) {
        const auto mixtures = 8 + data_rng.uniform_int(0, 40);
        const auto runs = 1 + data_rng.uniform_int(0, 8);
        MixtureGroupedSample sample;
        std::vector<double> flat;
        for (std::int64_t m = 0; m < mixtures; ++m) {
            const double center = data_rng.normal(27000.0, 900.0);
            std::vector<double> values;
            for (std::int64_t r = 0; r < runs; ++r) {
                values.push_back(data_rng.normal(center, 6000.0));
                flat.push_back(values.back());
            }
            sample.groups.push_back(std::move(values));
        }

        const std::uint64_t sub_seed = derive_seed(2300, static_cast<std::uint64_t>(ds));
        Rng lib_rng(sub_seed);
        Rng ref_rng(sub_seed);
        const auto draw = mixtures / 2 + 1;
        const auto lib = bootstrap_ci(sample, 500, draw, lib_rng);
        const auto ref = reference_bootstrap(sample, 500, draw, ref_rng);
        if (lib.ci95.lo != ref.ci95.lo || lib.ci95.hi != ref.ci95.hi ||
            lib.ci99.lo != ref.ci99.lo || lib.ci99.hi != ref.ci99.hi)
            ++ci_mismatches;

        // t-test against the trigonometric reference.
        const double target = 27000.0 + data_rng.normal(0.0, 500.0);
        const auto n = static_cast<std::int64_t>(flat.size());
        double mean = 0.0;
        for (double v : flat) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : flat) ss += (v - mean) * (v - mean);
        const double variance = ss / static_cast<double>(n - 1);
        const double t = (mean - target) / std::sqrt(variance / static_cast<double>(n));
        const double want = reference_t_two_sided(t, n - 1);
        const double got = one_sample_t_test(flat, target);
        worst_p_gap = std::max(worst_p_gap, std::fabs(want - got));
    }
    std::ostringstream detail;
    detail << "bootstrap CI mismatches " << ci_mismatches << "/50, max t-test p gap "
           << worst_p_gap << " (" << elapsed_s(t0) << "s)";
    report(6, ci_mismatches == 0 && worst_p_gap < 1e-10, detail.str());
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("fragsim acceptance suite (%d worker threads)\n", jobs());

    surplus_reproduction(1, "env3-cda", 27482.0, 40.48, 4242);
    surplus_reproduction(2, "env1-cda", 10383.0, 25.16, 4242);
    variant_split();
    self_alignment_calibration();
    property_suite();
    stats_oracles();

    std::printf("%s (%lds total)\n", g_failures == 0 ? "all criteria passed" : "FAILURES present",
                elapsed_s(t0));
    return g_failures == 0 ? 0 : 1;
}
