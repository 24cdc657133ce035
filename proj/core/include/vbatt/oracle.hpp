#pragma once

#include <string>
#include <vector>

#include "vbatt/battery.hpp"
#include "vbatt/scenario.hpp"

namespace vbatt {

// Hindsight-optimal schedule over a fully known trace, restricted to SoC
// values on the delta grid anchored at the initial SoC.
struct OfflineSolution {
    double total_cost = 0.0;
    double avg_cost = 0.0;
    std::vector<DispatchAction> actions;
    std::vector<double> soc_path;  // length horizon + 1, soc_path[0] = soc0
    double grid_step = 0.0;
};

// Backward-induction dynamic program over (slot, SoC) with SoC states on
// the grid {soc0 + k*delta}. Per transition, the cheapest action for a
// given net SoC change uses renewable before grid for both demand and
// charging, and is a pure charge or pure discharge by the sign of the
// net change. Ties between equal-cost transitions prefer the smallest
// battery movement.
//
// Throws "grid misalignment" if at some slot no grid point falls inside
// that slot's SoC window (delta too coarse for the window), and
// std::invalid_argument for delta <= 0 or an empty trace.
OfflineSolution offline_optimal(const Trace& trace, double soc0, double delta);

// Cost of serving demand with renewable first and the battery untouched.
double greedy_baseline(const Trace& trace);

// Optimal schedule as CSV:
// `slot,price,demand,renewable,r_e,r_b,g_e,g_b,b_e,soc,cost`
// where soc is the post-action state and cost the slot's purchase cost.
void write_schedule_csv(const Trace& trace, const OfflineSolution& solution,
                        const std::string& path);

}  // namespace vbatt
