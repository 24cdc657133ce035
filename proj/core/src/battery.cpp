#include "vbatt/battery.hpp"

#include <algorithm>
#include <stdexcept>

namespace vbatt {

void validate(const VirtualBatterySpec& spec) {
    if (spec.b_char < 0.0) throw std::invalid_argument("battery spec: b_char < 0");
    if (spec.b_dis < 0.0) throw std::invalid_argument("battery spec: b_dis < 0");
    if (spec.b_min > spec.b_max) throw std::invalid_argument("battery spec: b_min > b_max");
    if (!(spec.alpha > 0.0) || spec.alpha > 1.0)
        throw std::invalid_argument("battery spec: alpha outside (0, 1]");
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::charge_rate: return "charge_rate";
        case ViolationKind::discharge_rate: return "discharge_rate";
        case ViolationKind::soc_lower: return "soc_lower";
        case ViolationKind::soc_upper: return "soc_upper";
        case ViolationKind::negative_flow: return "negative_flow";
        case ViolationKind::complementarity: return "complementarity";
    }
    return "unknown";
}

double step_soc(double soc, double charge, double discharge, double alpha) {
    return alpha * soc + charge - discharge;
}

std::vector<Violation> check_feasible(const VirtualBatterySpec& spec,
                                      double b_next,
                                      const DispatchAction& action) {
    std::vector<Violation> out;
    auto add = [&out](ViolationKind kind, double magnitude, std::string detail) {
        out.push_back({kind, magnitude, std::move(detail)});
    };

    const double charge = action.charge();
    if (charge > spec.b_char + kFeasEps)
        add(ViolationKind::charge_rate, charge - spec.b_char, "g_b + r_b exceeds b_char");
    if (action.b_e > spec.b_dis + kFeasEps)
        add(ViolationKind::discharge_rate, action.b_e - spec.b_dis, "b_e exceeds b_dis");
    if (b_next < spec.b_min - kFeasEps)
        add(ViolationKind::soc_lower, spec.b_min - b_next, "b_next below b_min");
    if (b_next > spec.b_max + kFeasEps)
        add(ViolationKind::soc_upper, b_next - spec.b_max, "b_next above b_max");

    const struct { const char* name; double value; } flows[] = {
        {"r_e", action.r_e}, {"r_b", action.r_b}, {"g_e", action.g_e},
        {"g_b", action.g_b}, {"b_e", action.b_e},
    };
    for (const auto& f : flows) {
        if (f.value < -kFeasEps)
            add(ViolationKind::negative_flow, -f.value, std::string(f.name) + " < 0");
    }

    if (charge > kFeasEps && action.b_e > kFeasEps)
        add(ViolationKind::complementarity, std::min(charge, action.b_e),
            "simultaneous charge and discharge");

    return out;
}

EnvelopeConstants envelope(const SpecSeries& series, double p_max) {
    if (series.specs.empty()) throw std::invalid_argument("empty spec series");
    EnvelopeConstants env;
    env.b_char_max = series.specs.front().b_char;
    env.b_dis_max = series.specs.front().b_dis;
    env.b_min_bar = series.specs.front().b_min;
    env.b_max_bar = series.specs.front().b_max;
    env.p_max = p_max;
    for (const auto& s : series.specs) {
        env.b_char_max = std::max(env.b_char_max, s.b_char);
        env.b_dis_max = std::max(env.b_dis_max, s.b_dis);
        env.b_min_bar = std::max(env.b_min_bar, s.b_min);
        env.b_max_bar = std::min(env.b_max_bar, s.b_max);
    }
    return env;
}

}  // namespace vbatt
