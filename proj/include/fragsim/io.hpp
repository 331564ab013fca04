#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fragsim/experiment.hpp"
#include "fragsim/metrics.hpp"

namespace fragsim {

// Shortest round-trip decimal rendering; parse(format(x)) == x exactly.
std::string format_double(double value);
double parse_double(const std::string& text);

extern const char* const kResultsHeader;

std::string result_row_csv(const RunResult& row);
void write_results_csv(const std::string& path, const std::vector<RunResult>& rows);
std::vector<RunResult> read_results_csv(const std::string& path);

// Alignment target: the reference mean for one (experiment, metric) pair.
struct TargetEntry {
    std::string experiment_id;
    std::string metric;  // "zi_surplus" or "la_surplus"
    double target = 0.0;
};
std::vector<TargetEntry> read_targets_csv(const std::string& path);

// Experiment spec <-> JSON config file. Parsing accepts either a built-in
// "experiment" id or explicit environment/layout/profile fields; rendering
// is canonical, so parse(render(spec)) == spec.
std::string spec_to_json_string(const ExperimentSpec& spec);
ExperimentSpec spec_from_json_string(const std::string& text);
ExperimentSpec load_spec_file(const std::string& path);

void write_manifest(const std::string& path, const ExperimentSpec& spec,
                    std::int64_t row_count);
// Returns an error description if the manifest conflicts with the spec;
// empty when compatible.
std::string manifest_conflict(const std::string& path, const ExperimentSpec& spec);

} // namespace fragsim
