#include "vbatt/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

using namespace vbatt;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("generated samples stay inside their configured ranges") {
    ScenarioConfig cfg;  // defaults are the desk-scale experiment
    const auto trace = generate(cfg);
    REQUIRE(trace.horizon() == 720);
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        CHECK(trace.price[t] >= 0.5);
        CHECK(trace.price[t] <= 1.5);
        CHECK(trace.demand[t] >= 10000.0);
        CHECK(trace.demand[t] <= 20000.0);
        CHECK(trace.renewable[t] >= 0.0);
        CHECK(trace.renewable[t] <= 3000.0);
        const auto& s = trace.specs.specs[t];
        CHECK(s.b_char >= 100.0);
        CHECK(s.b_char <= 200.0);
        CHECK(s.b_dis >= 100.0);
        CHECK(s.b_dis <= 200.0);
        CHECK(s.b_min >= 1000.0);
        CHECK(s.b_min <= 2000.0);
        CHECK(s.b_max >= 3000.0);
        CHECK(s.b_max <= 4000.0);
        CHECK(s.alpha == 1.0);
    }
}

TEST_CASE("degenerate ranges collapse to constants") {
    ScenarioConfig cfg;
    cfg.horizon = 16;
    cfg.price_range = {0.7, 0.7};
    const auto trace = generate(cfg);
    for (double p : trace.price) CHECK(p == 0.7);
}

TEST_CASE("generation is a pure function of the config") {
    ScenarioConfig cfg;
    cfg.horizon = 128;
    cfg.seed = 99;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    CHECK(a == b);

    cfg.seed = 100;
    CHECK(generate(cfg) != a);
}

TEST_CASE("sample means sit near the range midpoints") {
    ScenarioConfig cfg;  // T = 720
    cfg.seed = 7;
    const auto trace = generate(cfg);
    auto check_mean = [&](const std::vector<double>& xs, const Range& r) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        const double se = r.width() / std::sqrt(12.0 * static_cast<double>(xs.size()));
        CHECK(std::abs(mean - r.mid()) <= 5.0 * se);
    };
    check_mean(trace.price, cfg.price_range);
    check_mean(trace.demand, cfg.demand_range);
    check_mean(trace.renewable, cfg.renewable_range);
}

TEST_CASE("declared envelope comes from the ranges") {
    ScenarioConfig cfg;
    const auto env = declared_envelope(cfg);
    CHECK(env.b_char_max == 200.0);
    CHECK(env.b_dis_max == 200.0);
    CHECK(env.b_min_bar == 2000.0);
    CHECK(env.b_max_bar == 3000.0);
    CHECK(env.p_max == 1.5);
}

TEST_CASE("realized envelope reflects the trace") {
    ScenarioConfig cfg;
    cfg.horizon = 64;
    const auto trace = generate(cfg);
    const auto env = realized_envelope(trace);
    CHECK(env.b_char_max <= 200.0);
    CHECK(env.b_min_bar <= 2000.0);
    CHECK(env.b_max_bar >= 3000.0);
    double p_max = 0.0;
    for (double p : trace.price) p_max = std::max(p_max, p);
    CHECK(env.p_max == p_max);
}

TEST_CASE("config invariants are enforced") {
    ScenarioConfig cfg;
    SUBCASE("crossed range") {
        cfg.price_range = {2.0, 1.0};
        CHECK_THROWS(validate(cfg));
    }
    SUBCASE("renewable above inverter capacity") {
        cfg.renewable_range = {0.0, 5000.0};
        CHECK_THROWS(validate(cfg));
    }
    SUBCASE("SoC windows may cross") {
        cfg.b_min_range = {1000.0, 3500.0};
        CHECK_THROWS(validate(cfg));
    }
}

TEST_CASE("trace CSV round-trips exactly") {
    ScenarioConfig cfg;
    cfg.horizon = 48;
    cfg.seed = 12345;
    const auto trace = generate(cfg);
    const auto path = temp_path("vbatt_roundtrip.csv");
    write_trace_csv(trace, path.string());
    const auto loaded = load_trace(path.string(), cfg.r_max);
    CHECK(loaded == trace);
}

TEST_CASE("load_trace rejects a header-only file") {
    const auto path = temp_path("vbatt_empty.csv");
    write_file(path, "slot,price,renewable,demand,b_char,b_dis,b_min,b_max\n");
    CHECK_THROWS_WITH(load_trace(path.string()),
                      doctest::Contains("trace has no rows"));
}

TEST_CASE("load_trace names the offending row") {
    const auto base = "slot,price,renewable,demand,b_char,b_dis,b_min,b_max\n";

    SUBCASE("renewable above r_max") {
        const auto path = temp_path("vbatt_badrow.csv");
        write_file(path, std::string(base) + "0,1.0,5000,15000,150,150,1500,3500\n");
        CHECK_THROWS_WITH(load_trace(path.string(), 3000.0),
                          doctest::Contains(":2: renewable exceeds r_max"));
    }
    SUBCASE("negative price") {
        const auto path = temp_path("vbatt_negprice.csv");
        write_file(path, std::string(base) +
                             "0,1.0,0,15000,150,150,1500,3500\n"
                             "1,-0.5,0,15000,150,150,1500,3500\n");
        CHECK_THROWS_WITH(load_trace(path.string()), doctest::Contains(":3: negative price"));
    }
    SUBCASE("ragged row") {
        const auto path = temp_path("vbatt_ragged.csv");
        write_file(path, std::string(base) + "0,1.0,0\n");
        CHECK_THROWS_WITH(load_trace(path.string()), doctest::Contains(":2:"));
    }
    SUBCASE("malformed number") {
        const auto path = temp_path("vbatt_nan.csv");
        write_file(path, std::string(base) + "0,abc,0,15000,150,150,1500,3500\n");
        CHECK_THROWS_WITH(load_trace(path.string()), doctest::Contains("cannot parse"));
    }
    SUBCASE("missing column") {
        const auto path = temp_path("vbatt_badheader.csv");
        write_file(path, "slot,price\n0,1.0\n");
        CHECK_THROWS_WITH(load_trace(path.string()), doctest::Contains("expected header"));
    }
}
