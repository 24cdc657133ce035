#pragma once

#include "vbatt/battery.hpp"

namespace vbatt {

// Online controller state: the battery SoC and its shifted copy, the
// virtual queue. The shift is fixed by (v, env) at init time, and both
// values advance by the same net flow, so
//   queue == soc - (env.b_min_bar + v * env.p_max + env.b_dis_max)
// holds at all times.
struct ControllerState {
    double soc = 0.0;
    double queue = 0.0;
    double v = 0.0;
    EnvelopeConstants env;
};

// What the controller sees at the start of a slot.
struct SlotObservation {
    double price;      // $/kWh
    double renewable;  // kWh available this slot
    double demand;     // kWh that must be served this slot
    VirtualBatterySpec spec;
};

// Largest penalty weight for which the SoC window is guaranteed:
// (b_max_bar - b_min_bar - b_dis_max - b_char_max) / p_max.
// A negative numerator means the envelope admits no guarantee and
// throws; a zero numerator returns 0, which rejects every V > 0.
double v_max(const EnvelopeConstants& env);

// Half the squared worst-case per-slot queue change, the constant in
// the drift bound and in the cost-gap guarantee.
double drift_constant(const EnvelopeConstants& env);

// Builds the state with the queue shifted from soc0. soc0 must lie in
// [b_min_bar, b_max_bar]; outside, the feasibility induction has no
// base case and this throws.
ControllerState init_state(double soc0, double v, const EnvelopeConstants& env);

// The per-slot objective the controller minimizes: the drift bound plus
// v times the purchase cost, up to a constant.
double p3_objective(double queue, double v, double price, const DispatchAction& action);

// Closed-form minimizer of the per-slot objective over the slot's
// feasible actions. Three regimes by the sign of queue and
// queue + v*price:
//   queue + v*price <= 0  -> charge at the full rate, renewable first;
//   queue <= 0 < queue+vp -> renewable to demand, then the better of
//                            discharging into demand or storing leftover
//                            renewable (exact ties charge);
//   queue > 0             -> discharge into demand, no charging.
// SoC bounds are deliberately not consulted; see project().
// Requires spec.alpha == 1.
DispatchAction dispatch(const ControllerState& state, const SlotObservation& obs);

// Applies an action: SoC and queue both move by g_b + r_b - b_e.
ControllerState advance(const ControllerState& state, const DispatchAction& action);

// Clips an action so the next SoC stays inside the slot's window:
// charging is cut g_b first then r_b; discharging is cut from b_e with
// the shortfall bought as g_e so demand balance is preserved. Feasible
// actions pass through unchanged.
DispatchAction project(const ControllerState& state,
                       const SlotObservation& obs,
                       const DispatchAction& action);

}  // namespace vbatt
