#include "vbatt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "vbatt/csv.hpp"

namespace vbatt {

SimReport run(const Trace& trace, double v, double soc0, bool projection,
              const EnvelopeConstants& env) {
    if (!(v > 0.0)) throw std::invalid_argument("run: v must be > 0");
    const std::size_t T = trace.horizon();
    if (T == 0) throw std::invalid_argument("run: empty trace");

    SimReport report;
    report.v = v;
    ControllerState state = init_state(soc0, v, env);
    report.soc_series.reserve(T + 1);
    report.queue_series.reserve(T + 1);
    report.actions.reserve(T);
    report.cost_series.reserve(T);

    for (std::size_t t = 0; t < T; ++t) {
        report.soc_series.push_back(state.soc);
        report.queue_series.push_back(state.queue);
        const SlotObservation obs{trace.price[t], trace.renewable[t], trace.demand[t],
                                  trace.specs.specs[t]};
        DispatchAction action = dispatch(state, obs);
        if (projection) action = project(state, obs, action);
        const double cost = obs.price * (action.g_e + action.g_b);
        report.total_cost += cost;
        report.cost_series.push_back(cost);
        report.actions.push_back(action);
        state = advance(state, action);
    }
    report.soc_series.push_back(state.soc);
    report.queue_series.push_back(state.queue);
    report.avg_cost = report.total_cost / static_cast<double>(T);

    // SoC excursions: each acting slot's resulting state against that
    // slot's window, the same pairing check_feasible certifies. Entry
    // `slot` names the acting slot.
    for (std::size_t t = 0; t < T; ++t) {
        const auto& spec = trace.specs.specs[t];
        const double soc = report.soc_series[t + 1];
        if (soc < spec.b_min - kFeasEps)
            report.violation_log.push_back({t, ViolationKind::soc_lower, spec.b_min - soc});
        else if (soc > spec.b_max + kFeasEps)
            report.violation_log.push_back({t, ViolationKind::soc_upper, soc - spec.b_max});
    }

    return report;
}

SimReport run_scenario(const ScenarioConfig& cfg, double v,
                       std::optional<double> soc0, bool projection,
                       bool realized_env) {
    const Trace trace = generate(cfg);
    const EnvelopeConstants env =
        realized_env ? realized_envelope(trace) : declared_envelope(cfg);
    const double start = soc0.value_or(0.5 * (env.b_min_bar + env.b_max_bar));
    SimReport report = run(trace, v, start, projection, env);
    report.seed = cfg.seed;
    report.config_echo = cfg;
    report.generator_name = kGeneratorName;
    return report;
}

std::vector<SweepRow> sweep_v(const ScenarioConfig& cfg,
                              const std::vector<double>& v_list,
                              const std::vector<std::uint64_t>& seeds,
                              bool projection, bool realized_env,
                              std::optional<double> soc0, unsigned jobs) {
    if (v_list.empty()) throw std::invalid_argument("sweep_v: empty v list");
    if (seeds.empty()) throw std::invalid_argument("sweep_v: empty seed list");

    // avg_cost and violation count per (v index, seed index).
    std::vector<std::vector<double>> costs(v_list.size(),
                                           std::vector<double>(seeds.size(), 0.0));
    std::vector<std::vector<std::size_t>> violations(
        v_list.size(), std::vector<std::size_t>(seeds.size(), 0));

    auto run_seed = [&](std::size_t si) {
        ScenarioConfig seeded = cfg;
        seeded.seed = seeds[si];
        for (std::size_t vi = 0; vi < v_list.size(); ++vi) {
            const SimReport report =
                run_scenario(seeded, v_list[vi], soc0, projection, realized_env);
            costs[vi][si] = report.avg_cost;
            violations[vi][si] = report.violation_log.size();
        }
    };

    const unsigned workers = std::max(1u, jobs);
    if (workers == 1) {
        for (std::size_t si = 0; si < seeds.size(); ++si) run_seed(si);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t si = next.fetch_add(1); si < seeds.size();
                     si = next.fetch_add(1))
                    run_seed(si);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<SweepRow> rows;
    rows.reserve(v_list.size());
    std::vector<std::size_t> order(v_list.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v_list[a] < v_list[b]; });
    for (std::size_t vi : order) {
        SweepRow row;
        row.v = v_list[vi];
        const auto& c = costs[vi];
        const double n = static_cast<double>(c.size());
        for (double x : c) row.mean_cost += x;
        row.mean_cost /= n;
        if (c.size() > 1) {
            double ss = 0.0;
            for (double x : c) ss += (x - row.mean_cost) * (x - row.mean_cost);
            row.std_cost = std::sqrt(ss / (n - 1.0));
        }
        for (std::size_t nv : violations[vi]) row.violations_total += nv;
        rows.push_back(row);
    }
    return rows;
}

void write_run_csv(const Trace& trace, const SimReport& report,
                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "slot,price,renewable,demand,r_e,r_b,g_e,g_b,b_e,soc,queue,cost\n";
    for (std::size_t t = 0; t < report.actions.size(); ++t) {
        const auto& a = report.actions[t];
        out << t << ',' << csv::format_double(trace.price[t]) << ','
            << csv::format_double(trace.renewable[t]) << ','
            << csv::format_double(trace.demand[t]) << ','
            << csv::format_double(a.r_e) << ',' << csv::format_double(a.r_b) << ','
            << csv::format_double(a.g_e) << ',' << csv::format_double(a.g_b) << ','
            << csv::format_double(a.b_e) << ','
            << csv::format_double(report.soc_series[t + 1]) << ','
            << csv::format_double(report.queue_series[t + 1]) << ','
            << csv::format_double(report.cost_series[t]) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "v,mean_cost,std_cost,violations_total\n";
    for (const auto& row : rows) {
        out << csv::format_double(row.v) << ',' << csv::format_double(row.mean_cost)
            << ',' << csv::format_double(row.std_cost) << ',' << row.violations_total
            << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace vbatt
