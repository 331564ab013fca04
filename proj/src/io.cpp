#include "fragsim/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fragsim {

std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc())
        throw std::runtime_error("bad numeric field: '" + text + "'");
    return value;
}

const char* const kResultsHeader =
    "experiment_id,env,config,latency,mixture_idx,run_idx,seed,zi_surplus,la_surplus,"
    "nbbo_spread_median,bbo_spread_mean_median,exec_time_mean,zi_tx,la_tx";

namespace {

std::string opt_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::optional<double> opt_parse(const std::string& field) {
    if (field.empty()) return std::nullopt;
    return parse_double(field);
}

} // namespace

std::string result_row_csv(const RunResult& row) {
    std::ostringstream out;
    out << row.experiment_id << ',' << row.env << ',' << row.config << ',' << row.latency << ','
        << row.mixture_index << ',' << row.run_index << ',' << row.seed << ','
        << format_double(row.zi_surplus) << ',' << format_double(row.la_surplus) << ','
        << opt_field(row.nbbo_spread_median) << ',' << opt_field(row.bbo_spread_mean_median)
        << ',' << opt_field(row.exec_time_mean) << ',' << row.zi_transactions << ','
        << row.la_transactions;
    return out.str();
}

void write_results_csv(const std::string& path, const std::vector<RunResult>& rows) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << kResultsHeader << '\n';
        for (const RunResult& row : rows) out << result_row_csv(row) << '\n';
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " to " + path);
}

std::vector<RunResult> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty results file " + path);
    if (line != kResultsHeader)
        throw std::runtime_error("unexpected results header in " + path);

    std::vector<RunResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 14)
            throw std::runtime_error("malformed results row in " + path + ": " + line);
        RunResult row;
        row.experiment_id = f[0];
        row.env = static_cast<int>(std::stol(f[1]));
        row.config = f[2];
        row.latency = std::stoll(f[3]);
        row.mixture_index = std::stoll(f[4]);
        row.run_index = std::stoll(f[5]);
        row.seed = std::stoull(f[6]);
        row.zi_surplus = parse_double(f[7]);
        row.la_surplus = parse_double(f[8]);
        row.nbbo_spread_median = opt_parse(f[9]);
        row.bbo_spread_mean_median = opt_parse(f[10]);
        row.exec_time_mean = opt_parse(f[11]);
        row.zi_transactions = std::stoll(f[12]);
        row.la_transactions = std::stoll(f[13]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TargetEntry> read_targets_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty targets file " + path);
    std::vector<TargetEntry> targets;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv(line);
        if (f.size() != 3)
            throw std::runtime_error("malformed targets row in " + path + ": " + line);
        targets.push_back(TargetEntry{f[0], f[1], parse_double(f[2])});
    }
    return targets;
}

namespace {

using nlohmann::json;

json profile_to_json(const StrategyProfile& profile) {
    json arr = json::array();
    for (double w : profile.weights) arr.push_back(w);
    return arr;
}

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["experiment_id"] = spec.experiment_id;
    j["environment"] = {{"id", spec.environment.id},
                        {"zi_count", spec.environment.zi_count},
                        {"arrival_rate", spec.environment.arrival_rate},
                        {"reversion", spec.environment.reversion},
                        {"horizon", spec.environment.horizon}};
    j["config"] = layout_name(spec.layout);
    j["latency"] = spec.latency;
    j["profile"] = profile_to_json(spec.profile);
    j["variant"] = variant_name(spec.variant);
    j["mixtures"] = spec.mixtures;
    j["runs_per_mixture"] = spec.runs_per_mixture;
    j["master_seed"] = spec.master_seed;
    j["exec_time_zi_only"] = spec.exec_time_zi_only;
    j["fundamental_mean"] = spec.fundamental_mean;
    j["shock_variance"] = spec.shock_variance;
    j["pv_variance"] = spec.pv_variance;
    j["la_alpha"] = spec.la_alpha;
    j["max_position"] = spec.max_position;
    j["output"] = spec.output_path;
    return j;
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec;
    if (j.contains("experiment")) {
        spec = spec_for_builtin(j.at("experiment").get<std::string>());
    } else if (j.contains("experiment_id") && find_experiment(j.at("experiment_id")) &&
               !j.contains("environment")) {
        spec = spec_for_builtin(j.at("experiment_id").get<std::string>());
    }

    if (j.contains("experiment_id")) spec.experiment_id = j.at("experiment_id");
    if (j.contains("environment")) {
        const json& e = j.at("environment");
        if (e.is_number_integer()) {
            spec.environment = environment(e.get<int>());
        } else {
            spec.environment.id = e.value("id", 0);
            spec.environment.zi_count = e.at("zi_count").get<std::int64_t>();
            spec.environment.arrival_rate = e.at("arrival_rate").get<double>();
            spec.environment.reversion = e.at("reversion").get<double>();
            spec.environment.horizon = e.at("horizon").get<Time>();
        }
    }
    if (j.contains("config")) spec.layout = layout_from_name(j.at("config"));
    if (j.contains("latency")) spec.latency = j.at("latency").get<Time>();
    if (j.contains("profile")) {
        const json& p = j.at("profile");
        if (p.is_string()) {
            const ExperimentCell* cell = find_experiment(p.get<std::string>());
            if (!cell) throw std::runtime_error("unknown profile id " + p.get<std::string>());
            spec.profile = cell->profile;
        } else {
            if (p.size() != kStrategyCount)
                throw std::runtime_error("profile must list 11 weights");
            for (std::size_t i = 0; i < kStrategyCount; ++i)
                spec.profile.weights[i] = p[i].get<double>();
        }
    }
    if (j.contains("variant")) spec.variant = variant_from_name(j.at("variant"));
    if (j.contains("mixtures")) spec.mixtures = j.at("mixtures").get<std::int64_t>();
    if (j.contains("runs_per_mixture"))
        spec.runs_per_mixture = j.at("runs_per_mixture").get<std::int64_t>();
    if (j.contains("master_seed")) spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("exec_time_zi_only")) spec.exec_time_zi_only = j.at("exec_time_zi_only");
    if (j.contains("fundamental_mean")) spec.fundamental_mean = j.at("fundamental_mean");
    if (j.contains("shock_variance")) spec.shock_variance = j.at("shock_variance");
    if (j.contains("pv_variance")) spec.pv_variance = j.at("pv_variance");
    if (j.contains("la_alpha")) spec.la_alpha = j.at("la_alpha");
    if (j.contains("max_position")) spec.max_position = j.at("max_position").get<std::int64_t>();
    if (j.contains("output")) spec.output_path = j.at("output");

    if (spec.environment.zi_count <= 0)
        throw std::runtime_error("experiment spec needs an environment (id or parameters)");
    if (spec.mixtures < 1 || spec.runs_per_mixture < 1)
        throw std::runtime_error("mixtures and runs_per_mixture must be at least 1");
    double sum = 0.0;
    for (double w : spec.profile.weights) sum += w;
    if (sum <= 0.0) throw std::runtime_error("profile has no positive weight");
    return spec;
}

} // namespace

std::string spec_to_json_string(const ExperimentSpec& spec) {
    return spec_to_json(spec).dump(2);
}

ExperimentSpec spec_from_json_string(const std::string& text) {
    return spec_from_json(json::parse(text));
}

ExperimentSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json j;
    in >> j;
    return spec_from_json(j);
}

void write_manifest(const std::string& path, const ExperimentSpec& spec,
                    std::int64_t row_count) {
    json j;
    j["schema"] = "fragsim-results-v1";
    j["code_version"] = "0.1.0";
    j["spec"] = json::parse(spec_to_json_string(spec));
    j["profile_table_checksum"] = profile_table_checksum();
    j["rows"] = row_count;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

std::string manifest_conflict(const std::string& path, const ExperimentSpec& spec) {
    std::ifstream in(path);
    if (!in) return "results file exists but its manifest " + path + " is missing";
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        return "manifest " + path + " is unreadable: " + e.what();
    }
    if (!j.contains("spec")) return "manifest " + path + " carries no spec";
    const std::string previous = j["spec"].dump(2);
    const std::string current = spec_to_json_string(spec);
    if (previous != current)
        return "manifest " + path + " was produced by a different spec; refusing to resume";
    return {};
}

} // namespace fragsim
