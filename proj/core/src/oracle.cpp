#include "vbatt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "vbatt/csv.hpp"

namespace vbatt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cheapest grid purchase for a given net battery change: demand plus the
// charge (or minus the discharge) not covered by renewable. Complementarity
// holds because the net change is realized as a pure charge or discharge.
double transition_cost(double price, double demand, double renewable, double net) {
    return price * std::max(0.0, demand + net - renewable);
}

// Splits a net change into a concrete action, renewable first.
DispatchAction reconstruct_action(double demand, double renewable, double net) {
    DispatchAction a;
    const double charge = std::max(net, 0.0);
    a.b_e = std::max(-net, 0.0);
    a.r_e = std::max(0.0, std::min(renewable, demand - a.b_e));
    a.r_b = std::max(0.0, std::min(renewable - a.r_e, charge));
    a.g_b = charge - a.r_b;
    a.g_e = std::max(0.0, demand - a.b_e - a.r_e);
    return a;
}

}  // namespace

OfflineSolution offline_optimal(const Trace& trace, double soc0, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("offline_optimal: delta must be > 0");
    const std::size_t T = trace.horizon();
    if (T == 0) throw std::invalid_argument("offline_optimal: empty trace");

    // SoC grid anchored at soc0, spanning every slot's window.
    double lo = soc0, hi = soc0;
    for (const auto& s : trace.specs.specs) {
        lo = std::min(lo, s.b_min);
        hi = std::max(hi, s.b_max);
    }
    const long k_lo = static_cast<long>(std::ceil((lo - soc0) / delta - 1e-12));
    const long k_hi = static_cast<long>(std::floor((hi - soc0) / delta + 1e-12));
    const std::size_t n_states = static_cast<std::size_t>(k_hi - k_lo + 1);
    const std::size_t origin = static_cast<std::size_t>(-k_lo);  // index of soc0
    auto soc_of = [&](std::size_t idx) {
        return soc0 + static_cast<double>(static_cast<long>(idx) + k_lo) * delta;
    };

    // Grid-point index window [first, last] inside a slot's SoC bounds.
    auto window = [&](const VirtualBatterySpec& s, std::size_t& first, std::size_t& last) {
        const long f = static_cast<long>(std::ceil((s.b_min - soc0) / delta - 1e-9)) - k_lo;
        const long l = static_cast<long>(std::floor((s.b_max - soc0) / delta + 1e-9)) - k_lo;
        if (f > l) return false;
        first = static_cast<std::size_t>(std::max(f, 0L));
        last = static_cast<std::size_t>(std::min(l, static_cast<long>(n_states) - 1));
        return first <= last;
    };
    for (std::size_t t = 0; t < T; ++t) {
        std::size_t first, last;
        if (!window(trace.specs.specs[t], first, last))
            throw std::runtime_error("grid misalignment: no SoC grid point inside the slot " +
                                     std::to_string(t) + " window");
    }

    // value[s] holds the cost-to-go from state s at the current slot;
    // choice[t][s] the chosen net step count.
    std::vector<double> value(n_states, 0.0), next_value(n_states, 0.0);
    std::vector<std::vector<int>> choice(T, std::vector<int>(n_states, 0));

    for (std::size_t t = T; t-- > 0;) {
        std::swap(value, next_value);  // next_value now holds V_{t+1}
        const auto& spec = trace.specs.specs[t];
        const double price = trace.price[t];
        const double demand = trace.demand[t];
        const double renewable = trace.renewable[t];

        const int max_charge_steps = static_cast<int>(std::floor(spec.b_char / delta + 1e-9));
        const int max_dis_steps = static_cast<int>(std::floor(spec.b_dis / delta + 1e-9));

        // Transition cost depends only on the net step, not the state.
        std::vector<double> step_cost(
            static_cast<std::size_t>(max_charge_steps + max_dis_steps + 1));
        for (int k = -max_dis_steps; k <= max_charge_steps; ++k) {
            // Discharged energy must be absorbed by demand (G_e >= 0).
            step_cost[static_cast<std::size_t>(k + max_dis_steps)] =
                (k < 0 && -k * delta > demand + kFeasEps)
                    ? kInf
                    : transition_cost(price, demand, renewable, k * delta);
        }

        // The landing state must satisfy this slot's window (so the pair
        // (action, soc) is feasible) and, before the last slot, the next
        // slot's window as well.
        std::size_t land_first, land_last;
        window(spec, land_first, land_last);
        if (t + 1 < T) {
            std::size_t nf, nl;
            window(trace.specs.specs[t + 1], nf, nl);
            land_first = std::max(land_first, nf);
            land_last = std::min(land_last, nl);
        }

        std::size_t state_first, state_last;
        window(spec, state_first, state_last);

        std::fill(value.begin(), value.end(), kInf);
        for (std::size_t s = state_first; s <= state_last; ++s) {
            double best = kInf;
            int best_net = 0;
            // Nets ordered by |steps| so equal-cost ties keep the battery still.
            for (int mag = 0; mag <= std::max(max_charge_steps, max_dis_steps); ++mag) {
                for (int sign = 0; sign < (mag == 0 ? 1 : 2); ++sign) {
                    const int k = sign == 0 ? mag : -mag;
                    if (k > max_charge_steps || -k > max_dis_steps) continue;
                    const long land = static_cast<long>(s) + k;
                    if (land < static_cast<long>(land_first) ||
                        land > static_cast<long>(land_last))
                        continue;
                    const double cost =
                        step_cost[static_cast<std::size_t>(k + max_dis_steps)] +
                        next_value[static_cast<std::size_t>(land)];
                    if (cost < best - 1e-12) {
                        best = cost;
                        best_net = k;
                    }
                }
            }
            value[s] = best;
            choice[t][s] = best_net;
        }
    }

    if (!std::isfinite(value[origin]))
        throw std::runtime_error("offline_optimal: no feasible path from the initial SoC");

    OfflineSolution sol;
    sol.grid_step = delta;
    sol.soc_path.reserve(T + 1);
    sol.actions.reserve(T);
    sol.soc_path.push_back(soc0);
    std::size_t s = origin;
    for (std::size_t t = 0; t < T; ++t) {
        const int k = choice[t][s];
        const auto action = reconstruct_action(trace.demand[t], trace.renewable[t], k * delta);
        sol.total_cost += trace.price[t] * (action.g_e + action.g_b);
        s = static_cast<std::size_t>(static_cast<long>(s) + k);
        sol.actions.push_back(action);
        sol.soc_path.push_back(soc_of(s));
    }
    sol.avg_cost = sol.total_cost / static_cast<double>(T);
    return sol;
}

double greedy_baseline(const Trace& trace) {
    double total = 0.0;
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        const double r_e = std::min(trace.renewable[t], trace.demand[t]);
        total += trace.price[t] * (trace.demand[t] - r_e);
    }
    return total;
}

void write_schedule_csv(const Trace& trace, const OfflineSolution& solution,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "slot,price,demand,renewable,r_e,r_b,g_e,g_b,b_e,soc,cost\n";
    for (std::size_t t = 0; t < solution.actions.size(); ++t) {
        const auto& a = solution.actions[t];
        const double cost = trace.price[t] * (a.g_e + a.g_b);
        out << t << ',' << csv::format_double(trace.price[t]) << ','
            << csv::format_double(trace.demand[t]) << ','
            << csv::format_double(trace.renewable[t]) << ','
            << csv::format_double(a.r_e) << ',' << csv::format_double(a.r_b) << ','
            << csv::format_double(a.g_e) << ',' << csv::format_double(a.g_b) << ','
            << csv::format_double(a.b_e) << ','
            << csv::format_double(solution.soc_path[t + 1]) << ','
            << csv::format_double(cost) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace vbatt
