#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fragsim/experiment.hpp"
#include "fragsim/io.hpp"
#include "fragsim/simulation.hpp"
#include "fragsim/stats.hpp"

namespace py = pybind11;
using namespace fragsim;

namespace {

py::dict result_to_dict(const RunResult& r) {
    py::dict d;
    d["experiment_id"] = r.experiment_id;
    d["env"] = r.env;
    d["config"] = r.config;
    d["latency"] = r.latency;
    d["mixture_idx"] = r.mixture_index;
    d["run_idx"] = r.run_index;
    d["seed"] = r.seed;
    d["zi_surplus"] = r.zi_surplus;
    d["la_surplus"] = r.la_surplus;
    d["nbbo_spread_median"] =
        r.nbbo_spread_median ? py::object(py::float_(*r.nbbo_spread_median)) : py::none();
    d["bbo_spread_mean_median"] =
        r.bbo_spread_mean_median ? py::object(py::float_(*r.bbo_spread_mean_median)) : py::none();
    d["exec_time_mean"] = r.exec_time_mean ? py::object(py::float_(*r.exec_time_mean)) : py::none();
    d["zi_tx"] = r.zi_transactions;
    d["la_tx"] = r.la_transactions;
    return d;
}

MixtureGroupedSample sample_from_lists(const std::vector<std::vector<double>>& groups) {
    MixtureGroupedSample s;
    s.groups = groups;
    return s;
}

} // namespace

PYBIND11_MODULE(_fragsim, m) {
    m.doc() = "Fragmented two-exchange market simulator with a bootstrap replication toolkit";
    m.attr("__version__") = "0.1.0";

    py::enum_<GreedyVariant>(m, "GreedyVariant")
        .value("BEST_GUESS", GreedyVariant::BestGuess)
        .value("MARKET_SIM", GreedyVariant::MarketSim)
        .value("MARKET_SIM_ROUTING_BUG", GreedyVariant::MarketSimRoutingBug);

    py::class_<ZiStrategy>(m, "ZiStrategy")
        .def(py::init<std::int64_t, std::int64_t, double>(), py::arg("shade_min"),
             py::arg("shade_max"), py::arg("take_fraction"))
        .def_readwrite("shade_min", &ZiStrategy::shade_min)
        .def_readwrite("shade_max", &ZiStrategy::shade_max)
        .def_readwrite("take_fraction", &ZiStrategy::take_fraction);

    py::class_<SimParams>(m, "SimParams")
        .def(py::init<>())
        .def_readwrite("exchange_count", &SimParams::exchange_count)
        .def_readwrite("with_la", &SimParams::with_la)
        .def_readwrite("sip_latency", &SimParams::sip_latency)
        .def_readwrite("horizon", &SimParams::horizon)
        .def_readwrite("arrival_rate", &SimParams::arrival_rate)
        .def_readwrite("fundamental_mean", &SimParams::fundamental_mean)
        .def_readwrite("reversion", &SimParams::reversion)
        .def_readwrite("shock_variance", &SimParams::shock_variance)
        .def_readwrite("pv_variance", &SimParams::pv_variance)
        .def_readwrite("la_alpha", &SimParams::la_alpha)
        .def_readwrite("max_position", &SimParams::max_position)
        .def_readwrite("variant", &SimParams::variant)
        .def_readwrite("greedy_enabled", &SimParams::greedy_enabled)
        .def_readwrite("exec_time_zi_only", &SimParams::exec_time_zi_only);

    m.def(
        "run_simulation",
        [](const SimParams& params, const std::vector<ZiStrategy>& strategies,
           std::uint64_t seed) { return result_to_dict(run_simulation(params, strategies, seed)); },
        py::arg("params"), py::arg("strategies"), py::arg("seed"));

    m.def("builtin_experiments", [] {
        std::vector<std::string> ids;
        for (const auto& cell : builtin_experiments()) ids.push_back(cell.id);
        return ids;
    });
    m.def("strategy_table", [] { return strategy_table(); });
    m.def(
        "experiment_profile",
        [](const std::string& id) {
            const ExperimentCell* cell = find_experiment(id);
            if (!cell) throw std::invalid_argument("unknown experiment id " + id);
            return std::vector<double>(cell->profile.weights.begin(), cell->profile.weights.end());
        },
        py::arg("experiment_id"));

    m.def(
        "run_cell",
        [](const std::string& experiment_id, const std::string& variant, std::int64_t mixture,
           std::int64_t run, std::uint64_t master_seed) {
            ExperimentSpec spec = spec_for_builtin(experiment_id);
            spec.variant = variant_from_name(variant);
            spec.master_seed = master_seed;
            spec.mixtures = mixture + 1;
            spec.runs_per_mixture = run + 1;
            return result_to_dict(run_cell(spec, mixture, run));
        },
        py::arg("experiment_id"), py::arg("variant"), py::arg("mixture"), py::arg("run"),
        py::arg("master_seed"));

    m.def(
        "sample_mixture",
        [](const std::vector<double>& weights, std::int64_t count, std::uint64_t seed) {
            if (weights.size() != kStrategyCount)
                throw std::invalid_argument("profile must list 11 weights");
            StrategyProfile profile;
            std::copy(weights.begin(), weights.end(), profile.weights.begin());
            Rng rng(seed);
            return sample_mixture(profile, count, rng);
        },
        py::arg("weights"), py::arg("count"), py::arg("seed"));

    m.def(
        "bootstrap_ci",
        [](const std::vector<std::vector<double>>& groups, std::int64_t samples,
           std::int64_t draw_size, std::uint64_t seed) {
            Rng rng(seed);
            const auto report = bootstrap_ci(sample_from_lists(groups), samples, draw_size, rng);
            py::dict d;
            d["mean"] = report.mean_of_means;
            d["se"] = report.se;
            d["ci95"] = py::make_tuple(report.ci95.lo, report.ci95.hi);
            d["ci99"] = py::make_tuple(report.ci99.lo, report.ci99.hi);
            return d;
        },
        py::arg("groups"), py::arg("samples"), py::arg("draw_size"), py::arg("seed"));

    m.def("one_sample_t_test", &one_sample_t_test, py::arg("values"), py::arg("target"));

    m.def(
        "self_alignment",
        [](const std::vector<std::vector<double>>& groups, std::int64_t trials,
           std::int64_t holdout, std::int64_t draw_size, std::int64_t samples,
           std::uint64_t seed) {
            Rng rng(seed);
            const auto res = self_alignment_experiment(sample_from_lists(groups), trials, holdout,
                                                       draw_size, samples, rng);
            py::dict d;
            d["trials"] = res.trials;
            d["t_reject_05"] = res.t_reject_05;
            d["t_reject_01"] = res.t_reject_01;
            d["boot_reject_95"] = res.boot_reject_95;
            d["boot_reject_99"] = res.boot_reject_99;
            return d;
        },
        py::arg("groups"), py::arg("trials"), py::arg("holdout"), py::arg("draw_size"),
        py::arg("samples"), py::arg("seed"));
}
