#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fragsim/experiment.hpp"

namespace fragsim {

const std::vector<Environment>& environments() {
    static const std::vector<Environment> envs = {
        {1, 24, 0.05, 0.05, 15000},
        {2, 238, 0.005, 0.02, 10000},
        {3, 58, 0.005, 0.02, 5000},
    };
    return envs;
}

const Environment& environment(int id) {
    for (const Environment& env : environments())
        if (env.id == id) return env;
    throw std::invalid_argument("unknown environment id " + std::to_string(id));
}

const std::vector<ZiStrategy>& strategy_table() {
    static const std::vector<ZiStrategy> table = {
        {0, 125, 1.0},     // ZI1
        {0, 250, 1.0},     // ZI2
        {0, 500, 1.0},     // ZI3
        {250, 500, 1.0},   // ZI4
        {0, 1000, 1.0},    // ZI5
        {500, 1000, 0.4},  // ZI6
        {500, 1000, 1.0},  // ZI7
        {0, 1500, 0.6},    // ZI8
        {1000, 2000, 0.4}, // ZI9
        {0, 2500, 0.4},    // ZI10
        {0, 2500, 1.0},    // ZI11
    };
    return table;
}

namespace {

struct ProfileRow {
    int env;
    MarketLayout layout;
    Time latency;
    std::array<double, kStrategyCount> weights;
};

// Surplus-maximizing equilibrium mixture probabilities per experiment,
// columns ZI1..ZI11.
const ProfileRow kProfileRows[] = {
    {1, MarketLayout::Cda, 0, {0, 0, 0, 0, 0, 0, 0, 0, 0.507, 0.493, 0}},
    {1, MarketLayout::TwoMarket, 0, {0, 0, 0, 0, 0, 0, 0, 0, 0, 1.0, 0}},
    {1, MarketLayout::TwoMarket, 100, {0, 0, 0, 0, 0, 0.602, 0, 0, 0.239, 0.159, 0}},
    {1, MarketLayout::TwoMarketLa, 100, {0, 0, 0, 0, 0, 0.237, 0, 0, 0.537, 0.226, 0}},
    {1, MarketLayout::TwoMarket, 200, {0, 0, 0, 0, 0, 0.381, 0, 0, 0.338, 0.281, 0}},
    {1, MarketLayout::TwoMarketLa, 200, {0, 0, 0, 0, 0, 0, 0, 0, 0.679, 0.321, 0}},
    {1, MarketLayout::TwoMarket, 300, {0, 0, 0, 0, 0, 0.692, 0, 0, 0.036, 0.272, 0}},
    {1, MarketLayout::TwoMarketLa, 300, {0, 0, 0, 0, 0, 0, 0, 0, 0.655, 0.345, 0}},
    {1, MarketLayout::TwoMarket, 400, {0, 0, 0, 0, 0, 0, 0, 0, 0.595, 0.405, 0}},
    {1, MarketLayout::TwoMarketLa, 400, {0, 0, 0, 0, 0, 0.47, 0, 0, 0.258, 0.272, 0}},
    {1, MarketLayout::TwoMarket, 600, {0, 0, 0, 0, 0, 0.81, 0, 0, 0, 0.19, 0}},
    {1, MarketLayout::TwoMarketLa, 600, {0, 0, 0, 0, 0, 0, 0.029, 0, 0, 0.971, 0}},
    {1, MarketLayout::TwoMarket, 700, {0, 0, 0, 0, 0, 0.739, 0, 0, 0, 0.261, 0}},
    {1, MarketLayout::TwoMarketLa, 700, {0, 0, 0, 0, 0, 0.006, 0, 0, 0.826, 0.168, 0}},
    {1, MarketLayout::TwoMarket, 900, {0, 0, 0, 0, 0, 0, 0, 0, 0, 1.0, 0}},
    {1, MarketLayout::TwoMarketLa, 900, {0, 0, 0, 0, 0, 0.131, 0, 0, 0, 0.869, 0}},

    {2, MarketLayout::Cda, 0, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0.659, 0.341}},
    {2, MarketLayout::TwoMarket, 0, {0.146, 0, 0, 0, 0, 0, 0, 0, 0, 0.854, 0}},
    // As printed this row sums to 0.994; normalized at load.
    {2, MarketLayout::TwoMarket, 50, {0, 0.162, 0, 0, 0, 0, 0, 0, 0, 0.832, 0}},
    {2, MarketLayout::TwoMarketLa, 50, {0, 0, 0.188, 0, 0, 0, 0, 0, 0, 0.812, 0}},
    {2, MarketLayout::TwoMarket, 100, {0.051, 0, 0, 0, 0, 0, 0, 0, 0, 0.76, 0.189}},
    {2, MarketLayout::TwoMarketLa, 100, {0, 0, 0, 0, 0, 0, 0, 0, 0.233, 0.767, 0}},

    {3, MarketLayout::Cda, 0, {0, 0, 0, 0, 0, 0, 0, 0, 0.248, 0.752, 0}},
    {3, MarketLayout::TwoMarket, 0, {0, 0, 0.017, 0, 0, 0, 0, 0, 0.004, 0.979, 0}},
    {3, MarketLayout::TwoMarket, 25, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0.854, 0.146}},
    {3, MarketLayout::TwoMarketLa, 25, {0, 0, 0, 0, 0, 0, 0, 0, 0.21, 0.79, 0}},
    {3, MarketLayout::TwoMarket, 50, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0.948, 0.052}},
    {3, MarketLayout::TwoMarketLa, 50, {0, 0, 0, 0, 0, 0, 0, 0.065, 0.043, 0.892, 0}},
    {3, MarketLayout::TwoMarket, 75, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0.823, 0.177}},
    {3, MarketLayout::TwoMarketLa, 75, {0, 0, 0, 0, 0, 0, 0, 0, 0.142, 0.858, 0}},
    {3, MarketLayout::TwoMarket, 100, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0.839, 0.161}},
    {3, MarketLayout::TwoMarketLa, 100, {0, 0, 0.015, 0, 0, 0, 0, 0, 0.231, 0.754, 0}},
};

std::string cell_id(const ProfileRow& row) {
    std::string id = "env" + std::to_string(row.env) + "-";
    switch (row.layout) {
        case MarketLayout::Cda: return id + "cda";
        case MarketLayout::TwoMarket:
            if (row.latency == 0) return id + "2m-d0";
            return id + "2mnola-d" + std::to_string(row.latency);
        case MarketLayout::TwoMarketLa: return id + "2mla-d" + std::to_string(row.latency);
    }
    return id;
}

std::uint64_t fnv1a(std::uint64_t hash, const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        hash ^= static_cast<unsigned char>(data[i]);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::vector<ExperimentCell> build_cells() {
    std::vector<ExperimentCell> cells;
    for (const ProfileRow& row : kProfileRows) {
        ExperimentCell cell;
        cell.id = cell_id(row);
        cell.env = row.env;
        cell.layout = row.layout;
        cell.latency = row.latency;
        cell.profile.weights = row.weights;

        double sum = 0.0;
        for (double w : cell.profile.weights) {
            if (w < 0.0) throw std::invalid_argument("negative weight in profile " + cell.id);
            sum += w;
        }
        if (sum <= 0.0) throw std::invalid_argument("all-zero profile " + cell.id);
        if (std::fabs(sum - 1.0) > 1e-9) {
            std::fprintf(stderr,
                         "fragsim: profile %s sums to %.6f as printed; renormalizing to 1\n",
                         cell.id.c_str(), sum);
            for (double& w : cell.profile.weights) w /= sum;
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace

const std::vector<ExperimentCell>& builtin_experiments() {
    static const std::vector<ExperimentCell> cells = build_cells();
    return cells;
}

const ExperimentCell* find_experiment(const std::string& id) {
    for (const ExperimentCell& cell : builtin_experiments())
        if (cell.id == id) return &cell;
    return nullptr;
}

std::uint64_t profile_table_checksum() {
    std::uint64_t hash = 1469598103934665603ULL;  // FNV offset basis
    char buf[64];
    for (const ProfileRow& row : kProfileRows) {
        int n = std::snprintf(buf, sizeof buf, "%d|%d|%" PRId64, row.env,
                              static_cast<int>(row.layout), static_cast<std::int64_t>(row.latency));
        hash = fnv1a(hash, buf, static_cast<std::size_t>(n));
        for (double w : row.weights) {
            n = std::snprintf(buf, sizeof buf, "|%.17g", w);
            hash = fnv1a(hash, buf, static_cast<std::size_t>(n));
        }
        hash = fnv1a(hash, "\n", 1);
    }
    return hash;
}

} // namespace fragsim
