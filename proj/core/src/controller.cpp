#include "vbatt/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vbatt {

namespace {

double clamp0(double x) { return std::max(x, 0.0); }

}  // namespace

double v_max(const EnvelopeConstants& env) {
    if (!(env.p_max > 0.0)) throw std::invalid_argument("v_max: p_max must be > 0");
    const double numerator =
        env.b_max_bar - env.b_min_bar - env.b_dis_max - env.b_char_max;
    if (numerator < 0.0) throw std::runtime_error("envelope too tight for any V");
    return numerator / env.p_max;
}

double drift_constant(const EnvelopeConstants& env) {
    return 0.5 * std::max(env.b_char_max * env.b_char_max,
                          env.b_dis_max * env.b_dis_max);
}

ControllerState init_state(double soc0, double v, const EnvelopeConstants& env) {
    if (soc0 < env.b_min_bar - kFeasEps || soc0 > env.b_max_bar + kFeasEps)
        throw std::runtime_error("initial SoC outside guaranteed envelope");
    ControllerState state;
    state.soc = soc0;
    state.queue = soc0 - env.b_min_bar - v * env.p_max - env.b_dis_max;
    state.v = v;
    state.env = env;
    return state;
}

double p3_objective(double queue, double v, double price, const DispatchAction& a) {
    const double vp = v * price;
    return (queue + vp) * a.g_b + queue * a.r_b - (queue + vp) * a.b_e - vp * a.r_e;
}

DispatchAction dispatch(const ControllerState& state, const SlotObservation& obs) {
    if (obs.spec.alpha != 1.0)
        throw std::invalid_argument("controller requires alpha = 1");
    if (obs.price < 0.0 || obs.renewable < 0.0 || obs.demand < 0.0)
        throw std::invalid_argument("observation has a negative field");

    const double q = state.queue;
    const double vp = state.v * obs.price;
    const double renewable = obs.renewable;
    const double demand = obs.demand;
    const double b_char = obs.spec.b_char;
    const double b_dis = obs.spec.b_dis;

    DispatchAction a;
    if (q + vp <= 0.0) {
        // Charging is at worst free in the objective; fill the full rate,
        // renewable before grid, and serve demand with what remains.
        a.r_b = std::min(renewable, b_char);
        a.b_e = 0.0;
        a.r_e = std::min(clamp0(renewable - a.r_b), demand);
        a.g_b = clamp0(b_char - a.r_b);
        a.g_e = clamp0(demand - a.r_e);
    } else if (q <= 0.0) {
        // Renewable serves demand first; the residual either discharges
        // the battery into demand or stores leftover renewable. Pick the
        // candidate with the smaller objective; exact ties charge.
        const double r_e = std::min(renewable, demand);

        DispatchAction discharge;
        discharge.r_e = r_e;
        discharge.b_e = std::min(b_dis, clamp0(demand - r_e));
        discharge.g_e = clamp0(demand - r_e - discharge.b_e);

        DispatchAction charge;
        charge.r_e = r_e;
        charge.r_b = std::min(clamp0(renewable - r_e), b_char);
        charge.g_e = clamp0(demand - r_e);

        const double obj_discharge = p3_objective(q, state.v, obs.price, discharge);
        const double obj_charge = p3_objective(q, state.v, obs.price, charge);
        a = obj_discharge < obj_charge ? discharge : charge;
    } else {
        // Positive queue: no charging; battery then renewable into demand.
        a.b_e = std::min(b_dis, demand);
        a.r_e = std::min(renewable, clamp0(demand - a.b_e));
        a.g_e = clamp0(demand - a.b_e - a.r_e);
    }
    return a;
}

ControllerState advance(const ControllerState& state, const DispatchAction& action) {
    ControllerState next = state;
    next.soc += action.net();
    // Rederiving the queue keeps the shift invariant exact in floating point.
    next.queue = next.soc -
                 (state.env.b_min_bar + state.v * state.env.p_max + state.env.b_dis_max);
    return next;
}

DispatchAction project(const ControllerState& state,
                       const SlotObservation& obs,
                       const DispatchAction& action) {
    DispatchAction a = action;
    const double b_next = step_soc(state.soc, a.charge(), a.b_e, 1.0);

    if (b_next > obs.spec.b_max + kFeasEps) {
        double excess = b_next - obs.spec.b_max;
        const double cut_gb = std::min(a.g_b, excess);
        a.g_b -= cut_gb;
        excess -= cut_gb;
        a.r_b -= std::min(a.r_b, excess);  // freed renewable is abandoned
    } else if (b_next < obs.spec.b_min - kFeasEps) {
        const double shortfall = obs.spec.b_min - b_next;
        const double cut = std::min(a.b_e, shortfall);
        a.b_e -= cut;
        a.g_e += cut;  // keep demand balance intact
    }
    return a;
}

}  // namespace vbatt
