#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vbatt {

// Absolute tolerance (kWh) for all feasibility comparisons. Violations
// smaller than this are floating-point drift, not constraint breaches.
inline constexpr double kFeasEps = 1e-9;

// Per-slot parameters of a virtual battery: charge/discharge rate limits,
// SoC window, and dissipation rate. Slot length is one hour, so power
// (kW) and per-slot energy (kWh) are numerically the same.
struct VirtualBatterySpec {
    double b_char = 0.0;   // charge-rate limit, kWh/slot
    double b_dis = 0.0;    // discharge-rate limit, kWh/slot
    double b_min = 0.0;    // SoC lower bound, kWh
    double b_max = 0.0;    // SoC upper bound, kWh
    double alpha = 1.0;    // dissipation rate, in (0, 1]

    bool operator==(const VirtualBatterySpec&) const = default;
};

// Throws std::invalid_argument if the spec violates its invariants
// (negative rates, crossed SoC bounds, alpha outside (0, 1]).
void validate(const VirtualBatterySpec& spec);

// Time-indexed battery parameterization. soc_shift records any constant
// offset that has been added to the SoC window relative to the native
// aggregate coordinates (used when shifting TCL windows to nonnegative
// bounds); 0 means bounds are in native coordinates.
struct SpecSeries {
    std::vector<VirtualBatterySpec> specs;
    double soc_shift = 0.0;

    std::size_t horizon() const { return specs.size(); }
    bool operator==(const SpecSeries&) const = default;
};

// Worst-case-over-time battery constants plus the price cap: the inputs
// to the virtual-queue shift and to the V upper bound.
struct EnvelopeConstants {
    double b_char_max = 0.0;  // max_t b_char(t)
    double b_dis_max = 0.0;   // max_t b_dis(t)
    double b_min_bar = 0.0;   // max_t b_min(t)
    double b_max_bar = 0.0;   // min_t b_max(t)
    double p_max = 0.0;       // price cap, $/kWh

    bool operator==(const EnvelopeConstants&) const = default;
};

// One slot's dispatch decision: how renewable, grid, and battery energy
// flow to demand and into the battery. All components in kWh.
struct DispatchAction {
    double r_e = 0.0;  // renewable -> demand
    double r_b = 0.0;  // renewable -> battery
    double g_e = 0.0;  // grid -> demand
    double g_b = 0.0;  // grid -> battery
    double b_e = 0.0;  // battery -> demand

    double charge() const { return g_b + r_b; }
    double net() const { return g_b + r_b - b_e; }

    bool operator==(const DispatchAction&) const = default;
};

enum class ViolationKind {
    charge_rate,       // g_b + r_b > b_char
    discharge_rate,    // b_e > b_dis
    soc_lower,         // b_next < b_min
    soc_upper,         // b_next > b_max
    negative_flow,     // some component < 0
    complementarity,   // charging and discharging in the same slot
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    double magnitude;  // how far past the constraint, in kWh
    std::string detail;
};

// One-slot SoC dynamics: alpha*b + charge - discharge. Pure arithmetic;
// feasibility is checked separately.
double step_soc(double soc, double charge, double discharge, double alpha);

// Checks a single slot's action and resulting SoC against the spec:
// rate limits, SoC window on b_next, nonnegative flows, and mutual
// exclusion of charge and discharge. Returns one entry per violated
// constraint; empty means feasible. Breaches within kFeasEps are ignored.
std::vector<Violation> check_feasible(const VirtualBatterySpec& spec,
                                      double b_next,
                                      const DispatchAction& action);

// Worst-case constants over a spec series: componentwise max over
// b_char/b_dis/b_min, min over b_max; p_max passed through.
// Throws std::invalid_argument on an empty series.
EnvelopeConstants envelope(const SpecSeries& series, double p_max);

}  // namespace vbatt
