// vbatt: trace generation, online simulation, V sweeps, the offline DP
// benchmark, and load aggregation behind one reproducible command line.
// All randomness flows through the single seed in the config; every run
// writes the fully resolved config next to its outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "vbatt/aggregation.hpp"
#include "vbatt/battery.hpp"
#include "vbatt/controller.hpp"
#include "vbatt/csv.hpp"
#include "vbatt/harness.hpp"
#include "vbatt/oracle.hpp"
#include "vbatt/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TclConfig {
    vbatt::TclParams params{};
    bool present = false;
};

// Everything a run needs, resolved from JSON config + flag overrides.
struct RunConfig {
    vbatt::ScenarioConfig scenario;
    std::size_t seeds = 20;  // seed count for sweeps and multi-seed stats
    double v = 100.0;
    std::vector<double> v_list{10.0, 50.0, 100.0, 200.0, 300.0, 400.0};
    std::optional<double> soc0;  // empty: middle of the envelope
    bool projection = false;
    double delta = 1.0;  // DP SoC grid step, kWh
    unsigned jobs = 1;
    std::string envelope = "declared";  // or "realized"
    TclConfig tcl;
};

vbatt::Range parse_range(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("config key '" + key + "' must be [lo, hi]");
    return {j[0].get<double>(), j[1].get<double>()};
}

vbatt::TclParams parse_tcl(const json& j) {
    static const std::set<std::string> known{"theta_r", "delta", "p_m", "b", "c", "alpha"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw std::runtime_error("unknown config key 'tcl." + key + "'");
    vbatt::TclParams p{};
    p.theta_r = j.at("theta_r").get<double>();
    p.delta = j.at("delta").get<double>();
    p.p_m = j.at("p_m").get<double>();
    p.b_coef = j.at("b").get<double>();
    p.c_coef = j.at("c").get<double>();
    p.alpha = j.at("alpha").get<double>();
    vbatt::validate(p);
    return p;
}

RunConfig parse_config(const json& j) {
    static const std::set<std::string> known{
        "horizon", "seed", "seeds", "price_range", "demand_range", "renewable_range",
        "b_char_range", "b_dis_range", "b_min_range", "b_max_range", "r_max",
        "v", "v_list", "soc0", "projection", "delta", "jobs", "envelope", "tcl"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw std::runtime_error("unknown config key '" + key + "'");

    RunConfig cfg;
    auto range = [&j](const char* key, vbatt::Range fallback) {
        return j.contains(key) ? parse_range(j.at(key), key) : fallback;
    };
    auto& sc = cfg.scenario;
    if (j.contains("horizon")) sc.horizon = j.at("horizon").get<std::size_t>();
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    sc.price_range = range("price_range", sc.price_range);
    sc.demand_range = range("demand_range", sc.demand_range);
    sc.renewable_range = range("renewable_range", sc.renewable_range);
    sc.b_char_range = range("b_char_range", sc.b_char_range);
    sc.b_dis_range = range("b_dis_range", sc.b_dis_range);
    sc.b_min_range = range("b_min_range", sc.b_min_range);
    sc.b_max_range = range("b_max_range", sc.b_max_range);
    if (j.contains("r_max")) sc.r_max = j.at("r_max").get<double>();
    vbatt::validate(sc);

    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::size_t>();
    if (j.contains("v")) cfg.v = j.at("v").get<double>();
    if (j.contains("v_list")) cfg.v_list = j.at("v_list").get<std::vector<double>>();
    if (j.contains("soc0") && !j.at("soc0").is_null())
        cfg.soc0 = j.at("soc0").get<double>();
    if (j.contains("projection")) cfg.projection = j.at("projection").get<bool>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<unsigned>();
    if (j.contains("envelope")) {
        cfg.envelope = j.at("envelope").get<std::string>();
        if (cfg.envelope != "declared" && cfg.envelope != "realized")
            throw std::runtime_error("config key 'envelope' must be 'declared' or 'realized'");
    }
    if (j.contains("tcl")) {
        cfg.tcl.params = parse_tcl(j.at("tcl"));
        cfg.tcl.present = true;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return parse_config(j);
}

json range_json(const vbatt::Range& r) { return json::array({r.lo, r.hi}); }

json effective_config_json(const RunConfig& cfg) {
    const auto& sc = cfg.scenario;
    json j{
        {"horizon", sc.horizon},
        {"seed", sc.seed},
        {"seeds", cfg.seeds},
        {"price_range", range_json(sc.price_range)},
        {"demand_range", range_json(sc.demand_range)},
        {"renewable_range", range_json(sc.renewable_range)},
        {"b_char_range", range_json(sc.b_char_range)},
        {"b_dis_range", range_json(sc.b_dis_range)},
        {"b_min_range", range_json(sc.b_min_range)},
        {"b_max_range", range_json(sc.b_max_range)},
        {"r_max", sc.r_max},
        {"v", cfg.v},
        {"v_list", cfg.v_list},
        {"soc0", cfg.soc0 ? json(*cfg.soc0) : json(nullptr)},
        {"projection", cfg.projection},
        {"delta", cfg.delta},
        {"jobs", cfg.jobs},
        {"envelope", cfg.envelope},
    };
    if (cfg.tcl.present) {
        j["tcl"] = {{"theta_r", cfg.tcl.params.theta_r}, {"delta", cfg.tcl.params.delta},
                    {"p_m", cfg.tcl.params.p_m},         {"b", cfg.tcl.params.b_coef},
                    {"c", cfg.tcl.params.c_coef},        {"alpha", cfg.tcl.params.alpha}};
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

fs::path prepare_out_dir(const std::string& out, const RunConfig& cfg) {
    fs::path dir(out);
    fs::create_directories(dir);
    write_text(dir / "effective_config.json", effective_config_json(cfg).dump(2) + "\n");
    return dir;
}

// Precedence for the seed: --seed flag, then VBATT_SEED, then config.
void apply_seed_override(RunConfig& cfg, const std::optional<std::uint64_t>& flag_seed) {
    if (const char* env = std::getenv("VBATT_SEED"); env && !flag_seed) {
        try {
            cfg.scenario.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw std::runtime_error("VBATT_SEED is not an unsigned integer");
        }
    }
    if (flag_seed) cfg.scenario.seed = *flag_seed;
}

vbatt::EnvelopeConstants pick_envelope(const RunConfig& cfg, const vbatt::Trace& trace) {
    return cfg.envelope == "realized" ? vbatt::realized_envelope(trace)
                                      : vbatt::declared_envelope(cfg.scenario);
}

void write_spec_series_csv(const vbatt::SpecSeries& series, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "slot,b_char,b_dis,b_min,b_max,alpha\n";
    for (std::size_t t = 0; t < series.horizon(); ++t) {
        const auto& s = series.specs[t];
        out << t << ',' << vbatt::csv::format_double(s.b_char) << ','
            << vbatt::csv::format_double(s.b_dis) << ','
            << vbatt::csv::format_double(s.b_min) << ','
            << vbatt::csv::format_double(s.b_max) << ','
            << vbatt::csv::format_double(s.alpha) << '\n';
    }
}

struct CommonFlags {
    std::string config_path;
    std::string trace_path;
    std::string out_dir = ".";
    std::optional<double> v;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> projection;
    std::optional<double> delta;
    std::optional<unsigned> jobs;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_trace = true) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    if (with_trace) cmd->add_option("--trace", flags.trace_path, "trace CSV file");
    cmd->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--v", flags.v, "Lyapunov weight V");
    cmd->add_option("--seed", flags.seed, "RNG seed (overrides VBATT_SEED and config)");
    cmd->add_option("--projection", flags.projection, "on|off: project dispatch onto the SoC window")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--delta", flags.delta, "SoC grid step for the offline DP, kWh");
    cmd->add_option("--jobs", flags.jobs, "parallel runs for sweeps");
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg = flags.config_path.empty() ? RunConfig{} : load_config(flags.config_path);
    apply_seed_override(cfg, flags.seed);
    if (flags.v) cfg.v = *flags.v;
    if (flags.projection) cfg.projection = *flags.projection == "on";
    if (flags.delta) cfg.delta = *flags.delta;
    if (flags.jobs) cfg.jobs = *flags.jobs;
    return cfg;
}

int cmd_generate(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(flags.out_dir, cfg);
    const vbatt::Trace trace = vbatt::generate(cfg.scenario);
    vbatt::write_trace_csv(trace, (dir / "trace.csv").string());
    json summary{{"command", "generate"},
                 {"horizon", trace.horizon()},
                 {"seed", cfg.scenario.seed},
                 {"generator", vbatt::kGeneratorName},
                 {"trace", (dir / "trace.csv").string()}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(flags.out_dir, cfg);

    vbatt::Trace trace;
    bool from_file = !flags.trace_path.empty();
    if (from_file) {
        trace = vbatt::load_trace(flags.trace_path, cfg.scenario.r_max);
    } else {
        trace = vbatt::generate(cfg.scenario);
    }
    const vbatt::EnvelopeConstants env =
        (from_file && flags.config_path.empty()) ? vbatt::realized_envelope(trace)
                                                 : pick_envelope(cfg, trace);
    const double soc0 = cfg.soc0.value_or(0.5 * (env.b_min_bar + env.b_max_bar));
    vbatt::SimReport report = vbatt::run(trace, cfg.v, soc0, cfg.projection, env);
    report.seed = cfg.scenario.seed;
    report.generator_name = from_file ? "" : vbatt::kGeneratorName;
    if (!from_file) report.config_echo = cfg.scenario;

    vbatt::write_run_csv(trace, report, (dir / "run.csv").string());
    json summary{{"command", "simulate"},
                 {"total_cost", report.total_cost},
                 {"avg_cost", report.avg_cost},
                 {"v", report.v},
                 {"soc0", soc0},
                 {"projection", cfg.projection},
                 {"horizon", trace.horizon()},
                 {"violations", report.violation_log.size()},
                 {"generator", report.generator_name},
                 {"seed", report.seed}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(flags.out_dir, cfg);
    std::vector<std::uint64_t> seeds(cfg.seeds);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seeds[i] = cfg.scenario.seed + static_cast<std::uint64_t>(i);
    const auto rows = vbatt::sweep_v(cfg.scenario, cfg.v_list, seeds, cfg.projection,
                                     cfg.envelope == "realized", cfg.soc0, cfg.jobs);
    vbatt::write_sweep_csv(rows, (dir / "sweep.csv").string());
    json jrows = json::array();
    for (const auto& row : rows)
        jrows.push_back({{"v", row.v},
                         {"mean_cost", row.mean_cost},
                         {"std_cost", row.std_cost},
                         {"violations_total", row.violations_total}});
    json summary{{"command", "sweep"}, {"seeds", cfg.seeds}, {"rows", jrows}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_oracle(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(flags.out_dir, cfg);
    vbatt::Trace trace;
    if (!flags.trace_path.empty()) {
        trace = vbatt::load_trace(flags.trace_path, cfg.scenario.r_max);
    } else {
        trace = vbatt::generate(cfg.scenario);
    }
    const vbatt::EnvelopeConstants env =
        (!flags.trace_path.empty() && flags.config_path.empty())
            ? vbatt::realized_envelope(trace)
            : pick_envelope(cfg, trace);
    const double soc0 = cfg.soc0.value_or(0.5 * (env.b_min_bar + env.b_max_bar));
    const auto solution = vbatt::offline_optimal(trace, soc0, cfg.delta);
    vbatt::write_schedule_csv(trace, solution, (dir / "schedule.csv").string());
    json summary{{"command", "oracle"},
                 {"total_cost", solution.total_cost},
                 {"avg_cost", solution.avg_cost},
                 {"greedy_cost", vbatt::greedy_baseline(trace)},
                 {"delta", solution.grid_step},
                 {"soc0", soc0},
                 {"horizon", trace.horizon()}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_vmax(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const auto env = vbatt::declared_envelope(cfg.scenario);
    std::cout << vbatt::csv::format_double(vbatt::v_max(env)) << '\n';
    return 0;
}

int cmd_aggregate(const CommonFlags& flags, const std::string& tasks_path,
                  const std::string& tcl_path, std::size_t horizon, bool shift) {
    RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(flags.out_dir, cfg);
    if (tasks_path.empty() == tcl_path.empty())
        throw std::runtime_error("aggregate: give exactly one of --tasks or --tcl");

    vbatt::SpecSeries series;
    json summary{{"command", "aggregate"}};
    if (!tasks_path.empty()) {
        const auto tasks = vbatt::load_tasks_csv(tasks_path);
        std::size_t T = horizon;
        if (T == 0)
            for (const auto& task : tasks)
                T = std::max(T, static_cast<std::size_t>(task.deadline));
        series = vbatt::tasks_to_vb(tasks, T);
        summary["kind"] = "tasks";
        summary["tasks"] = tasks.size();
    } else {
        if (!cfg.tcl.present)
            throw std::runtime_error("aggregate --tcl requires a config with a 'tcl' object");
        const auto tcl_series = vbatt::load_tcl_series_csv(tcl_path);
        auto result = vbatt::tcl_to_vb(cfg.tcl.params, tcl_series.ambient, tcl_series.it_power);
        series = std::move(result.series);
        std::ofstream nominal(dir / "nominal_power.csv");
        nominal << "slot,p_nominal\n";
        for (std::size_t t = 0; t < result.nominal_power.size(); ++t)
            nominal << t << ',' << vbatt::csv::format_double(result.nominal_power[t]) << '\n';
        summary["kind"] = "tcl";
        summary["nominal_power"] = (dir / "nominal_power.csv").string();
    }
    if (shift) series = vbatt::shift_soc_window(series, vbatt::nonnegative_shift(series));
    write_spec_series_csv(series, dir / "specs.csv");
    summary["horizon"] = series.horizon();
    summary["soc_shift"] = series.soc_shift;
    summary["specs"] = (dir / "specs.csv").string();
    std::cout << summary.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual-battery aggregation and online electricity procurement"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string tasks_path, tcl_path;
    std::size_t agg_horizon = 0;
    bool agg_shift = true;

    auto* generate = app.add_subcommand("generate", "emit a synthetic trace CSV");
    add_common_flags(generate, flags, /*with_trace=*/false);
    auto* simulate = app.add_subcommand("simulate", "run the online controller over a trace");
    add_common_flags(simulate, flags);
    auto* sweep = app.add_subcommand("sweep", "mean cost across seeds for each V");
    add_common_flags(sweep, flags, /*with_trace=*/false);
    auto* oracle = app.add_subcommand("oracle", "offline DP optimum over a known trace");
    add_common_flags(oracle, flags);
    auto* vmax = app.add_subcommand("vmax", "print the largest guaranteed-safe V");
    add_common_flags(vmax, flags, /*with_trace=*/false);
    auto* aggregate =
        app.add_subcommand("aggregate", "turn task or TCL inputs into a battery spec series");
    add_common_flags(aggregate, flags, /*with_trace=*/false);
    aggregate->add_option("--tasks", tasks_path, "task CSV (arrival,deadline,max_power,energy)");
    aggregate->add_option("--tcl", tcl_path, "TCL exogenous series CSV (slot,theta_a,r)");
    aggregate->add_option("--horizon", agg_horizon, "slots for the task battery (default: max deadline)");
    aggregate->add_flag("--shift,!--no-shift", agg_shift,
                        "shift the SoC window to nonnegative bounds (default on)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are usage errors
    }

    try {
        if (generate->parsed()) return cmd_generate(flags);
        if (simulate->parsed()) return cmd_simulate(flags);
        if (sweep->parsed()) return cmd_sweep(flags);
        if (oracle->parsed()) return cmd_oracle(flags);
        if (vmax->parsed()) return cmd_vmax(flags);
        if (aggregate->parsed())
            return cmd_aggregate(flags, tasks_path, tcl_path, agg_horizon, agg_shift);
    } catch (const std::exception& e) {
        std::cerr << "vbatt: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
