#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vbatt/battery.hpp"

namespace vbatt {

// Thermostatic cooling load. The deadband around the setpoint is the
// flexibility that the battery transform exposes.
struct TclParams {
    double theta_r;  // temperature setpoint, degC
    double delta;    // deadband half-width, degC
    double p_m;      // max cooling power, kW
    double b_coef;   // temperature drop per unit cooling power, degC/kW
    double c_coef;   // temperature rise per unit IT power, degC/kW
    double alpha;    // thermal inertia, in (0, 1)
};

void validate(const TclParams& params);

// Deferrable compute task: must receive `energy` kWh between arrival and
// deadline, at most `max_power` kWh per slot.
struct Task {
    int arrival;       // first slot the task may run
    int deadline;      // first slot the task may no longer run
    double max_power;  // kWh per slot at full speed
    double energy;     // total kWh to deliver

    bool operator==(const Task&) const = default;
};

void validate(const Task& task);

// Result of the TCL-to-battery transform: a battery whose SoC tracks the
// temperature deviation from the setpoint, plus the nominal power series
// that holds the room exactly at the setpoint.
struct TclBattery {
    SpecSeries series;
    std::vector<double> nominal_power;  // p_0(t), kW
};

// Maps a TCL with ambient-temperature and IT-power series onto a virtual
// battery: per slot, charge limit p_m - p_0(t), discharge limit p_0(t),
// SoC window +-delta/((1-alpha)*b). Throws std::runtime_error
// "nominal power out of range at slot t" if the setpoint is unreachable
// at some slot (p_0 outside [0, p_m]).
TclBattery tcl_to_vb(const TclParams& params,
                     std::span<const double> ambient,
                     std::span<const double> it_power);

// Aggregates a task set into a charge-only battery over `horizon` slots:
// charge limit = summed max power of active tasks, discharge limit 0,
// SoC window = the cumulative-energy envelope that keeps every task
// completable by its deadline. Throws if a task's deadline exceeds the
// horizon.
SpecSeries tasks_to_vb(const std::vector<Task>& tasks, std::size_t horizon);

// Componentwise sum of battery parameters. Exact only for identical
// dissipation rates; mixed alphas throw "dissipation mismatch".
VirtualBatterySpec merge(const std::vector<VirtualBatterySpec>& specs);

// Adds `shift` to every slot's SoC window and records it in soc_shift.
SpecSeries shift_soc_window(SpecSeries series, double shift);

// Smallest constant shift that makes every slot's SoC window nonnegative.
double nonnegative_shift(const SpecSeries& series);

// CSV ingestion. Tasks: header `arrival,deadline,max_power,energy`.
// TCL exogenous series: header `slot,theta_a,r`. Parse and validation
// errors carry the offending row number.
std::vector<Task> load_tasks_csv(const std::string& path);

struct TclSeries {
    std::vector<double> ambient;   // theta_a(t), degC
    std::vector<double> it_power;  // r(t), kW
};

TclSeries load_tcl_series_csv(const std::string& path);

}  // namespace vbatt
