// End-to-end checks of the vbatt binary: exit codes, output artifacts,
// reproducibility. The binary path comes in via VBATT_CLI_PATH.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string stdout_text;
};

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "vbatt_cli_test";
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args) {
    const auto out_file = scratch_dir() / "stdout.txt";
    const std::string command =
        std::string(VBATT_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int raw = std::system(command.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(raw), ss.str()};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("vmax prints the guaranteed-safe limit for the default config") {
    const auto result = run_cli("vmax");
    CHECK(result.exit_code == 0);
    CHECK(result.stdout_text == "400\n");
}

TEST_CASE("unknown flags are usage errors, bad data is a data error") {
    CHECK(run_cli("simulate --nonsense").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("simulate --trace /nonexistent.csv").exit_code == 1);

    const auto bad_config = scratch_dir() / "bad_config.json";
    write_file(bad_config, R"({"unknown_key": 1})");
    const auto result = run_cli("vmax --config " + bad_config.string());
    CHECK(result.exit_code == 1);
}

TEST_CASE("generate then simulate round-trips through CSV") {
    const auto dir = scratch_dir() / "gen";
    const auto config = scratch_dir() / "small.json";
    write_file(config, R"({"horizon": 32, "seed": 7, "v": 50})");

    auto gen = run_cli("generate --config " + config.string() + " --out " + dir.string());
    REQUIRE(gen.exit_code == 0);
    REQUIRE(fs::exists(dir / "trace.csv"));
    REQUIRE(fs::exists(dir / "effective_config.json"));

    const auto sim_dir = scratch_dir() / "sim";
    auto sim = run_cli("simulate --config " + config.string() + " --trace " +
                       (dir / "trace.csv").string() + " --out " + sim_dir.string());
    REQUIRE(sim.exit_code == 0);
    const json summary = json::parse(sim.stdout_text);
    CHECK(summary.at("command") == "simulate");
    CHECK(summary.at("horizon") == 32);
    CHECK(summary.at("v") == 50.0);
    CHECK(fs::exists(sim_dir / "run.csv"));

    // Simulating from the config directly must match the loaded-trace run.
    const auto sim2_dir = scratch_dir() / "sim2";
    auto sim2 = run_cli("simulate --config " + config.string() + " --out " +
                        sim2_dir.string());
    REQUIRE(sim2.exit_code == 0);
    const json summary2 = json::parse(sim2.stdout_text);
    CHECK(summary2.at("total_cost") == summary.at("total_cost"));
}

TEST_CASE("byte-identical outputs for identical command, config, and seed") {
    const auto config = scratch_dir() / "repro.json";
    write_file(config, R"({"horizon": 24, "seed": 11})");
    const auto dir_a = scratch_dir() / "a";
    const auto dir_b = scratch_dir() / "b";
    REQUIRE(run_cli("generate --config " + config.string() + " --out " + dir_a.string())
                .exit_code == 0);
    REQUIRE(run_cli("generate --config " + config.string() + " --out " + dir_b.string())
                .exit_code == 0);
    CHECK(read_file(dir_a / "trace.csv") == read_file(dir_b / "trace.csv"));
    CHECK(read_file(dir_a / "effective_config.json") ==
          read_file(dir_b / "effective_config.json"));
}

TEST_CASE("VBATT_SEED overrides the config seed, flags override both") {
    const auto config = scratch_dir() / "seeded.json";
    write_file(config, R"({"horizon": 16, "seed": 1})");
    const auto dir_cfg = scratch_dir() / "seed_cfg";
    const auto dir_env = scratch_dir() / "seed_env";
    const auto dir_flag = scratch_dir() / "seed_flag";
    const auto dir_two = scratch_dir() / "seed_two";

    REQUIRE(run_cli("generate --config " + config.string() + " --out " +
                    dir_cfg.string()).exit_code == 0);
    REQUIRE(run_cli("generate --config " + config.string() + " --seed 2 --out " +
                    dir_two.string()).exit_code == 0);

    setenv("VBATT_SEED", "2", 1);
    REQUIRE(run_cli("generate --config " + config.string() + " --out " +
                    dir_env.string()).exit_code == 0);
    REQUIRE(run_cli("generate --config " + config.string() + " --seed 1 --out " +
                    dir_flag.string()).exit_code == 0);
    unsetenv("VBATT_SEED");

    CHECK(read_file(dir_env / "trace.csv") == read_file(dir_two / "trace.csv"));
    CHECK(read_file(dir_env / "trace.csv") != read_file(dir_cfg / "trace.csv"));
    CHECK(read_file(dir_flag / "trace.csv") == read_file(dir_cfg / "trace.csv"));
}

TEST_CASE("effective config reloads to the identical effective config") {
    const auto config = scratch_dir() / "partial.json";
    write_file(config, R"({"horizon": 16, "v": 25, "projection": true})");
    const auto dir_a = scratch_dir() / "eff_a";
    const auto dir_b = scratch_dir() / "eff_b";
    REQUIRE(run_cli("generate --config " + config.string() + " --out " + dir_a.string())
                .exit_code == 0);
    // Feed the dumped effective config back in.
    REQUIRE(run_cli("generate --config " + (dir_a / "effective_config.json").string() +
                    " --out " + dir_b.string()).exit_code == 0);
    CHECK(read_file(dir_a / "effective_config.json") ==
          read_file(dir_b / "effective_config.json"));
    CHECK(read_file(dir_a / "trace.csv") == read_file(dir_b / "trace.csv"));
}

TEST_CASE("a minimal config gets the documented defaults") {
    const auto config = scratch_dir() / "minimal.json";
    write_file(config, R"({"price_range": [0.5, 1.5]})");
    const auto dir = scratch_dir() / "minimal_out";
    REQUIRE(run_cli("generate --config " + config.string() + " --out " + dir.string())
                .exit_code == 0);
    const json effective = json::parse(read_file(dir / "effective_config.json"));
    CHECK(effective.at("horizon") == 720);
    CHECK(effective.at("seeds") == 20);
    CHECK(effective.at("delta") == 1.0);
    CHECK(effective.at("projection") == false);
    CHECK(effective.at("envelope") == "declared");
}

TEST_CASE("config validation points at the broken key") {
    const auto config = scratch_dir() / "crossed.json";
    write_file(config, R"({"b_min_range": [1000, 3500], "b_max_range": [3000, 4000]})");
    const auto result = run_cli("vmax --config " + config.string());
    CHECK(result.exit_code == 1);
}

TEST_CASE("simulate with zero demand reports zero cost") {
    const auto config = scratch_dir() / "zero.json";
    write_file(config,
               R"({"horizon": 16, "demand_range": [0, 0], "renewable_range": [0, 0],
                   "v": 1})");
    const auto result = run_cli("simulate --config " + config.string() + " --out " +
                                (scratch_dir() / "zero_out").string());
    REQUIRE(result.exit_code == 0);
    const json summary = json::parse(result.stdout_text);
    CHECK(summary.at("total_cost") == 0.0);
}

TEST_CASE("oracle recovers the two-slot arbitrage optimum") {
    const auto trace_path = scratch_dir() / "arb.csv";
    write_file(trace_path,
               "slot,price,renewable,demand,b_char,b_dis,b_min,b_max\n"
               "0,1,0,5,10,10,0,10\n"
               "1,2,0,5,10,10,0,10\n");
    const auto config = scratch_dir() / "arb.json";
    write_file(config, R"({"soc0": 0, "delta": 1, "b_min_range": [0, 0],
                           "b_max_range": [10, 10], "r_max": 3000})");
    const auto result = run_cli("oracle --trace " + trace_path.string() + " --config " +
                                config.string() + " --out " +
                                (scratch_dir() / "arb_out").string());
    REQUIRE(result.exit_code == 0);
    const json summary = json::parse(result.stdout_text);
    CHECK(summary.at("total_cost") == 10.0);
    CHECK(summary.at("greedy_cost") == 15.0);
    CHECK(fs::exists(scratch_dir() / "arb_out" / "schedule.csv"));
}

TEST_CASE("sweep emits one row per v") {
    const auto config = scratch_dir() / "sweep.json";
    write_file(config, R"({"horizon": 24, "seeds": 3, "v_list": [10, 100]})");
    const auto dir = scratch_dir() / "sweep_out";
    const auto result =
        run_cli("sweep --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const json summary = json::parse(result.stdout_text);
    REQUIRE(summary.at("rows").size() == 2);
    CHECK(summary.at("rows")[0].at("v") == 10.0);
    CHECK(summary.at("rows")[1].at("v") == 100.0);
    const auto csv = read_file(dir / "sweep.csv");
    CHECK(csv.rfind("v,mean_cost,std_cost,violations_total\n", 0) == 0);
}

TEST_CASE("aggregate turns task CSVs into a spec series") {
    const auto tasks_path = scratch_dir() / "tasks.csv";
    write_file(tasks_path,
               "arrival,deadline,max_power,energy\n"
               "0,2,1,2\n");
    const auto dir = scratch_dir() / "agg_out";
    const auto result = run_cli("aggregate --tasks " + tasks_path.string() + " --out " +
                                dir.string());
    REQUIRE(result.exit_code == 0);
    const json summary = json::parse(result.stdout_text);
    CHECK(summary.at("kind") == "tasks");
    CHECK(summary.at("horizon") == 2);
    const auto csv = read_file(dir / "specs.csv");
    CHECK(csv.rfind("slot,b_char,b_dis,b_min,b_max,alpha\n", 0) == 0);
    CHECK(csv.find("1,1,0,1,1,1\n") != std::string::npos);
}

TEST_CASE("aggregate shifts a TCL battery to nonnegative bounds") {
    const auto series_path = scratch_dir() / "tcl_series.csv";
    write_file(series_path,
               "slot,theta_a,r\n"
               "0,26,200\n"
               "1,25,100\n");
    const auto config = scratch_dir() / "tcl.json";
    write_file(config,
               R"({"tcl": {"theta_r": 22, "delta": 1, "p_m": 10, "b": 2, "c": 0.01,
                   "alpha": 0.9}})");
    const auto dir = scratch_dir() / "tcl_out";
    const auto result = run_cli("aggregate --tcl " + series_path.string() + " --config " +
                                config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const json summary = json::parse(result.stdout_text);
    CHECK(summary.at("kind") == "tcl");
    CHECK(summary.at("soc_shift").get<double>() ==
          doctest::Approx(5.0));  // deadband 1 / (0.1 * 2)
    REQUIRE(fs::exists(dir / "nominal_power.csv"));
    const auto csv = read_file(dir / "specs.csv");
    // First slot: p_0 = 3, so rates split 7/3 and the window starts at 0.
    CHECK(csv.find("0,7,3,0,10") != std::string::npos);
}
