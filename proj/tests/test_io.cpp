#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fragsim/io.hpp"

using namespace fragsim;

TEST_CASE("double formatting round-trips exactly") {
    const double values[] = {0.0,       1.0,    -1.5,          0.1,
                             1.0 / 3.0, 1e-300, 12345.6789012, 27482.0};
    for (double v : values) CHECK(parse_double(format_double(v)) == v);
}

TEST_CASE("result rows serialize with empty optional fields") {
    RunResult row;
    row.experiment_id = "env3-cda";
    row.env = 3;
    row.config = "cda";
    row.latency = 0;
    row.mixture_index = 4;
    row.run_index = 9;
    row.seed = 123456789;
    row.zi_surplus = 27482.5;
    row.la_surplus = 0.0;
    row.nbbo_spread_median = 607.0;
    row.exec_time_mean = std::nullopt;
    row.bbo_spread_mean_median = std::nullopt;
    row.zi_transactions = 120;
    row.la_transactions = 0;
    CHECK(result_row_csv(row) ==
          "env3-cda,3,cda,0,4,9,123456789,27482.5,0,607,,,120,0");
}

TEST_CASE("results files round-trip including absent metrics") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "fragsim_io_test.csv").string();

    std::vector<RunResult> rows(2);
    rows[0].experiment_id = "env3-cda";
    rows[0].env = 3;
    rows[0].config = "cda";
    rows[0].zi_surplus = 1.5;
    rows[0].nbbo_spread_median = 3.25;
    rows[1].experiment_id = "env3-cda";
    rows[1].env = 3;
    rows[1].config = "cda";
    rows[1].run_index = 1;
    rows[1].zi_surplus = -2.5;

    write_results_csv(path, rows);
    const auto loaded = read_results_csv(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].nbbo_spread_median == 3.25);
    CHECK(!loaded[1].nbbo_spread_median);
    CHECK(result_row_csv(loaded[0]) == result_row_csv(rows[0]));
    CHECK(result_row_csv(loaded[1]) == result_row_csv(rows[1]));
    std::remove(path.c_str());
}

TEST_CASE("targets files parse and skip comments") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "fragsim_targets_test.csv").string();
    {
        std::ofstream out(path);
        out << "experiment_id,metric,target\n";
        out << "# reference means\n";
        out << "env3-cda,zi_surplus,27482\n";
        out << "env3-2mla-d25,la_surplus,538\n";
    }
    const auto targets = read_targets_csv(path);
    REQUIRE(targets.size() == 2);
    CHECK(targets[0].experiment_id == "env3-cda");
    CHECK(targets[0].metric == "zi_surplus");
    CHECK(targets[0].target == 27482.0);
    CHECK(targets[1].metric == "la_surplus");
    std::remove(path.c_str());
}

TEST_CASE("malformed results files are rejected") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "fragsim_bad_test.csv").string();
    {
        std::ofstream out(path);
        out << "not,the,header\n";
    }
    CHECK_THROWS(read_results_csv(path));
    std::remove(path.c_str());
    CHECK_THROWS(read_results_csv(path));
}
