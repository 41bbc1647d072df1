#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "transim/commands.hpp"
#include "transim/csv.hpp"
#include "transim/network_io.hpp"
#include "transim/reporting.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace transim;
using fixtures::at;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<fs::path> files_under(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

template <class Command>
Run run(Command command, const RunConfig& config) {
    std::ostringstream out, err;
    const int code = command(config, out, err);
    return {code, out.str(), err.str()};
}

RunConfig generated(const fs::path& dir, std::uint64_t seed = 42) {
    RunConfig c;
    c.out_dir = dir;
    c.seed = seed;
    return c;
}

RunConfig using_data(const fs::path& data, const fs::path& out) {
    RunConfig c;
    c.data_dir = data;
    c.out_dir = out;
    return c;
}

int shell(const std::string& args) {
    const int status = std::system((std::string(TRANSIM_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("generate writes a complete dataset") {
    fixtures::TempDir dir("gen");
    const auto r = run(cmd_generate, generated(dir.path() / "data"));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("generated") != std::string::npos);
    for (const char* name : {"network.json", "timetable.csv", "demand.csv", "afc.csv", "true_paths.csv", "metadata.json",
                             "ground_truth_flows.out"}) {
        CHECK(fs::exists(dir.path() / "data" / name));
    }
    const auto data = load_dataset(dir.path() / "data");
    CHECK(data.metadata.demand_seed == 42);
    CHECK(data.metadata.sim.seed == 42);
    CHECK(data.afc.size() == read_csv(dir.path() / "data" / "demand.csv").rows.size());
}

TEST_CASE("generate with the same seed is byte-identical") {
    fixtures::TempDir dir("gen2");
    REQUIRE(run(cmd_generate, generated(dir.path() / "a", 7)).code == 0);
    REQUIRE(run(cmd_generate, generated(dir.path() / "b", 7)).code == 0);
    REQUIRE(run(cmd_generate, generated(dir.path() / "c", 8)).code == 0);
    const auto files = files_under(dir.path() / "a");
    CHECK(files == files_under(dir.path() / "b"));
    for (const auto& f : files) CHECK(slurp(dir.path() / "a" / f) == slurp(dir.path() / "b" / f));
    CHECK(slurp(dir.path() / "a" / "afc.csv") != slurp(dir.path() / "c" / "afc.csv"));
}

TEST_CASE("generate from custom files") {
    fixtures::TempDir dir("custom");
    auto config = generated(dir.path() / "out");
    config.network_file = dir.path() / "missing.json";
    config.timetable_file = dir.path() / "t.csv";
    config.demand_file = dir.path() / "d.csv";
    const auto missing = run(cmd_generate, config);
    CHECK(missing.code == 2);
    CHECK(missing.err.find("missing.json") != std::string::npos);

    // reuse the bundled dataset's files as custom input
    REQUIRE(run(cmd_generate, generated(dir.path() / "base")).code == 0);
    config.network_file = dir.path() / "base" / "network.json";
    config.timetable_file = dir.path() / "base" / "timetable.csv";
    config.demand_file = dir.path() / "base" / "demand.csv";
    REQUIRE(run(cmd_generate, config).code == 0);
    CHECK(slurp(dir.path() / "out" / "afc.csv") == slurp(dir.path() / "base" / "afc.csv"));

    config.timetable_file.reset();
    CHECK(run(cmd_generate, config).code == 2);
}

TEST_CASE("simulate") {
    fixtures::TempDir dir("sim");
    const auto data = dir.path() / "data";
    REQUIRE(run(cmd_generate, generated(data)).code == 0);

    SUBCASE("true coefficients with the generator's seed reproduce the ground truth") {
        auto config = using_data(data, dir.path() / "true");
        REQUIRE(run(cmd_simulate, config).code == 0);
        CHECK(slurp(dir.path() / "true" / "od_exit_flows.out") == slurp(data / "ground_truth_flows.out"));
        for (const char* name : {"passengers.out", "loads.out", "queues.out", "journey_times.out", "left_behind.out",
                                 "peak_queues.out"}) {
            CHECK(fs::exists(dir.path() / "true" / name));
        }
    }
    SUBCASE("benchmark rules run and differ from the truth") {
        for (auto choice : {ChoiceSource::uniform, ChoiceSource::shortest}) {
            auto config = using_data(data, dir.path() / "bench");
            config.choice = choice;
            const auto r = run(cmd_simulate, config);
            REQUIRE(r.code == 0);
            CHECK(slurp(dir.path() / "bench" / "od_exit_flows.out") != slurp(data / "ground_truth_flows.out"));
        }
    }
    SUBCASE("calibrated without a parameter file is a configuration error") {
        auto config = using_data(data, dir.path() / "cal");
        config.choice = ChoiceSource::calibrated;
        const auto r = run(cmd_simulate, config);
        CHECK(r.code == 2);
        CHECK(r.err.find("beta_best.json") != std::string::npos);
    }
    SUBCASE("missing dataset") {
        CHECK(run(cmd_simulate, using_data(dir.path() / "nowhere", dir.path() / "x")).code == 2);
        CHECK(run(cmd_simulate, RunConfig{}).code == 2);
    }
}

TEST_CASE("calibrate") {
    fixtures::TempDir dir("cal");
    const auto data = dir.path() / "data";
    REQUIRE(run(cmd_generate, generated(data)).code == 0);

    SUBCASE("budget below the initial design is rejected") {
        auto config = using_data(data, dir.path() / "c");
        config.budget = 9;
        const auto r = run(cmd_calibrate, config);
        CHECK(r.code == 2);
        CHECK_FALSE(fs::exists(dir.path() / "c" / "trace.csv"));
    }
    SUBCASE("one trace row per evaluation") {
        auto config = using_data(data, dir.path() / "c");
        config.budget = 13;
        const auto r = run(cmd_calibrate, config);
        REQUIRE(r.code == 0);
        CHECK(read_csv(dir.path() / "c" / "trace.csv").rows.size() == 13);
        const auto beta = read_params(dir.path() / "c" / "beta_best.json");
        for (double b : beta.as_array()) {
            CHECK(b <= 0.0);
            CHECK(b >= -10.0);
        }
        const auto report = read_csv(dir.path() / "c" / "report.csv");
        CHECK(report.header.back() == "true");
        CHECK(r.out.find("after 13 evaluations") != std::string::npos);
    }
    SUBCASE("bad knobs") {
        auto config = using_data(data, dir.path() / "c");
        config.eta = -1;
        CHECK(run(cmd_calibrate, config).code == 2);
        config = using_data(data, dir.path() / "c");
        config.bounds = {{0, 0, 0, 0}, {-1, -1, -1, -1}};
        CHECK(run(cmd_calibrate, config).code == 2);
    }
}

TEST_CASE("compare") {
    fixtures::TempDir dir("cmp");
    const auto data = dir.path() / "data";
    REQUIRE(run(cmd_generate, generated(data)).code == 0);
    fs::create_directories(data / "calibration");
    write_params(data / "calibration" / "beta_best.json", kReferenceParams);

    const auto r = run(cmd_compare, using_data(data, dir.path() / "cmp"));
    REQUIRE(r.code == 0);
    const auto rmse = read_csv(dir.path() / "cmp" / "rmse.csv");
    REQUIRE(rmse.rows.size() == 9);
    const auto model = rmse.column("model");
    const auto value = rmse.column("rmse");
    for (const auto& row : rmse.rows) {
        if (row[model] == "calibrated") {
            CHECK(std::stod(row[value]) == 0.0);
        } else {
            CHECK(std::stod(row[value]) > 0.0);
        }
    }
    CHECK(fs::exists(dir.path() / "cmp" / "scatter.csv"));
}

TEST_CASE("origin rmse hand check") {
    const IntervalGrid grid{at("17:00:00"), 900};
    const StationIndex o1(0), o2(1), d1(2), d2(3);
    ExitFlowTensor truth(grid), model(grid);
    truth.set({{o1, d1}, 4}, 1);
    truth.set({{o1, d1}, 5}, 1);
    model.set({{o1, d1}, 4}, 3);
    model.set({{o1, d2}, 4}, 1);
    model.set({{o1, d1}, 5}, 1);
    model.set({{o1, d1}, 9}, 50);  // outside the window
    const ReportWindow w{"w", at("18:00:00"), at("18:30:00")};
    // origin o1: (4-1)^2 + 0 over two intervals, o2 adds two zero cells
    CHECK(origin_exit_rmse(model, truth, w, {o1}) == doctest::Approx(std::sqrt(9.0 / 2.0)));
    CHECK(origin_exit_rmse(model, truth, w, {o1, o2}) == doctest::Approx(1.5));
    CHECK(origin_exit_rmse(truth, truth, w, {o1, o2}) == 0.0);

    const auto cmp = compare_models(truth, {{"m", model}}, {w}, {o1, o2}, at("17:00:00"), at("20:00:00"));
    REQUIRE(cmp.rmse.size() == 1);
    CHECK(cmp.rmse[0].rmse == doctest::Approx(1.5));
    CHECK_THROWS_AS(compare_models(truth, {{"m", model}}, {{"late", at("19:30:00"), at("20:30:00")}}, {o1}, at("17:00:00"),
                                   at("20:00:00")),
                    ValidationError);
}

TEST_CASE("run configuration file") {
    fixtures::TempDir dir("cfg");
    {
        std::ofstream out(dir.path() / "run.json");
        out << R"({"data": "dataset", "out": "results", "seed": 5, "budget": 30, "eta": 100,
                   "choice": "shortest", "bounds": {"lower": [-5, -5, -5, -5], "upper": [0, 0, 0, 0]}})";
    }
    const auto c = read_run_config(dir.path() / "run.json");
    CHECK(c.data_dir == dir.path() / "dataset");
    CHECK(c.out_dir == dir.path() / "results");
    CHECK(c.seed == std::optional<std::uint64_t>(5));
    CHECK(c.budget == 30);
    CHECK(c.eta == 100.0);
    CHECK(c.choice == ChoiceSource::shortest);
    CHECK(c.bounds.lower[0] == -5.0);

    {
        std::ofstream out(dir.path() / "bad.json");
        out << "{ not json";
    }
    CHECK_THROWS_AS(read_run_config(dir.path() / "bad.json"), ValidationError);
    CHECK_THROWS_AS(read_run_config(dir.path() / "none.json"), ValidationError);
    CHECK_THROWS_AS(parse_choice_source("logit"), ValidationError);
    CHECK(parse_choice_source("uniform") == ChoiceSource::uniform);
}

TEST_CASE("command-line exit codes") {
    fixtures::TempDir dir("exit");
    CHECK(shell("") == 2);
    CHECK(shell("--help") == 0);
    CHECK(shell("frobnicate") == 2);
    CHECK(shell("simulate --data " + (dir.path() / "nowhere").string()) == 2);
    CHECK(shell("generate --out " + (dir.path() / "d").string() + " --seed 3") == 0);
    CHECK(shell("calibrate --data " + (dir.path() / "d").string() + " --budget 5 --out " + (dir.path() / "c").string()) == 2);
    CHECK(shell("simulate --data " + (dir.path() / "d").string() + " --choice bogus") == 2);
}
