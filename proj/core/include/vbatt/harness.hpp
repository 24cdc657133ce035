#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vbatt/battery.hpp"
#include "vbatt/controller.hpp"
#include "vbatt/scenario.hpp"

namespace vbatt {

// One SoC excursion outside a slot's window: the acting slot's resulting
// state left [b_min, b_max] of that slot's spec. bound is soc_lower or
// soc_upper; magnitude is the distance past the bound in kWh.
struct SocViolation {
    std::size_t slot;
    ViolationKind bound;
    double magnitude;
};

struct SimReport {
    double total_cost = 0.0;
    double avg_cost = 0.0;
    std::vector<double> soc_series;    // B(0..T), length horizon + 1
    std::vector<double> queue_series;  // Q(0..T), same length
    std::vector<DispatchAction> actions;
    std::vector<double> cost_series;   // per-slot purchase cost
    std::vector<SocViolation> violation_log;
    double v = 0.0;
    std::uint64_t seed = 0;
    std::optional<ScenarioConfig> config_echo;
    std::string generator_name;
};

// Runs the online controller over a trace: observe, dispatch, optionally
// project, apply, accumulate cost, and log any SoC-bound excursion
// against the per-slot spec (tolerance kFeasEps). Deterministic given
// its inputs. The envelope is supplied by the caller; experiments
// normally declare it up front rather than measuring the trace.
SimReport run(const Trace& trace, double v, double soc0, bool projection,
              const EnvelopeConstants& env);

// Convenience wrapper: generate the trace from cfg, pick the envelope
// (declared from cfg ranges, or realized from the trace), default soc0
// to the middle of the envelope, and stamp seed/config/generator into
// the report.
SimReport run_scenario(const ScenarioConfig& cfg, double v,
                       std::optional<double> soc0 = std::nullopt,
                       bool projection = false, bool realized_env = false);

struct SweepRow {
    double v = 0.0;
    double mean_cost = 0.0;   // mean over seeds of per-slot average cost
    double std_cost = 0.0;    // sample standard deviation over seeds
    std::size_t violations_total = 0;
};

// One run per (v, seed); per-seed traces are generated from cfg with the
// seed substituted. Rows come back ordered by v. jobs > 1 runs seeds in
// parallel; results are identical regardless.
std::vector<SweepRow> sweep_v(const ScenarioConfig& cfg,
                              const std::vector<double>& v_list,
                              const std::vector<std::uint64_t>& seeds,
                              bool projection = false, bool realized_env = false,
                              std::optional<double> soc0 = std::nullopt,
                              unsigned jobs = 1);

// Per-slot series CSV:
// `slot,price,renewable,demand,r_e,r_b,g_e,g_b,b_e,soc,queue,cost`
// with soc/queue the post-action state for the row's slot.
void write_run_csv(const Trace& trace, const SimReport& report,
                   const std::string& path);

// Sweep CSV: `v,mean_cost,std_cost,violations_total`.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace vbatt
