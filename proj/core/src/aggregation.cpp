#include "vbatt/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vbatt/csv.hpp"

namespace vbatt {

void validate(const TclParams& params) {
    if (!(params.delta > 0.0)) throw std::invalid_argument("tcl params: delta must be > 0");
    if (!(params.p_m > 0.0)) throw std::invalid_argument("tcl params: p_m must be > 0");
    if (!(params.b_coef > 0.0)) throw std::invalid_argument("tcl params: b must be > 0");
    if (params.c_coef < 0.0) throw std::invalid_argument("tcl params: c must be >= 0");
    if (!(params.alpha > 0.0) || !(params.alpha < 1.0))
        throw std::invalid_argument("tcl params: alpha outside (0, 1)");
}

void validate(const Task& task) {
    if (task.arrival >= task.deadline)
        throw std::invalid_argument("task: arrival must precede deadline");
    if (!(task.max_power > 0.0)) throw std::invalid_argument("task: max_power must be > 0");
    const double span = static_cast<double>(task.deadline - task.arrival);
    if (!(task.energy > 0.0) || task.energy > span * task.max_power + kFeasEps)
        throw std::invalid_argument("task: energy not deliverable within [arrival, deadline)");
}

TclBattery tcl_to_vb(const TclParams& params,
                     std::span<const double> ambient,
                     std::span<const double> it_power) {
    validate(params);
    if (ambient.size() != it_power.size())
        throw std::invalid_argument("tcl_to_vb: series lengths differ");

    const double soc_bound = params.delta / ((1.0 - params.alpha) * params.b_coef);
    TclBattery out;
    out.series.specs.reserve(ambient.size());
    out.nominal_power.reserve(ambient.size());
    for (std::size_t t = 0; t < ambient.size(); ++t) {
        const double p0 =
            (ambient[t] + params.c_coef * it_power[t] - params.theta_r) / params.b_coef;
        if (p0 < -kFeasEps || p0 > params.p_m + kFeasEps)
            throw std::runtime_error("nominal power out of range at slot " + std::to_string(t));
        out.nominal_power.push_back(p0);
        out.series.specs.push_back({
            .b_char = params.p_m - p0,
            .b_dis = p0,
            .b_min = -soc_bound,
            .b_max = soc_bound,
            .alpha = params.alpha,
        });
    }
    return out;
}

SpecSeries tasks_to_vb(const std::vector<Task>& tasks, std::size_t horizon) {
    for (const auto& task : tasks) {
        validate(task);
        if (static_cast<std::size_t>(task.deadline) > horizon)
            throw std::runtime_error("task exceeds horizon");
    }

    SpecSeries series;
    series.specs.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        double u_max = 0.0;
        double finished = 0.0;   // energy owed to tasks already past deadline
        double lower = 0.0;      // must-have-delivered floor for active tasks
        double upper = 0.0;      // can-have-delivered ceiling for active tasks
        const auto slot = static_cast<int>(t);
        for (const auto& task : tasks) {
            if (task.deadline <= slot) {
                finished += task.energy;
            } else if (task.arrival <= slot) {
                u_max += task.max_power;
                const double remaining_cap =
                    static_cast<double>(task.deadline - slot) * task.max_power;
                lower += std::max(task.energy - remaining_cap, 0.0);
                const double delivered_cap =
                    static_cast<double>(slot - task.arrival) * task.max_power;
                upper += std::min(task.energy, delivered_cap);
            }
        }
        series.specs.push_back({
            .b_char = u_max,
            .b_dis = 0.0,  // delivered compute energy cannot be undone
            .b_min = finished + lower,
            .b_max = finished + upper,
            .alpha = 1.0,
        });
    }
    return series;
}

VirtualBatterySpec merge(const std::vector<VirtualBatterySpec>& specs) {
    if (specs.empty()) throw std::invalid_argument("merge: empty spec list");
    VirtualBatterySpec sum{0.0, 0.0, 0.0, 0.0, specs.front().alpha};
    for (const auto& s : specs) {
        if (s.alpha != sum.alpha) throw std::runtime_error("dissipation mismatch");
        sum.b_char += s.b_char;
        sum.b_dis += s.b_dis;
        sum.b_min += s.b_min;
        sum.b_max += s.b_max;
    }
    return sum;
}

SpecSeries shift_soc_window(SpecSeries series, double shift) {
    for (auto& s : series.specs) {
        s.b_min += shift;
        s.b_max += shift;
    }
    series.soc_shift += shift;
    return series;
}

double nonnegative_shift(const SpecSeries& series) {
    double shift = 0.0;
    for (const auto& s : series.specs) shift = std::max(shift, -s.b_min);
    return shift;
}

std::vector<Task> load_tasks_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    csv::require_header(table, {"arrival", "deadline", "max_power", "energy"});
    std::vector<Task> tasks;
    tasks.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        Task task{
            .arrival = static_cast<int>(table.number(i, 0)),
            .deadline = static_cast<int>(table.number(i, 1)),
            .max_power = table.number(i, 2),
            .energy = table.number(i, 3),
        };
        try {
            validate(task);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(i + 2) + ": " + e.what());
        }
        tasks.push_back(task);
    }
    return tasks;
}

TclSeries load_tcl_series_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    csv::require_header(table, {"slot", "theta_a", "r"});
    TclSeries out;
    out.ambient.reserve(table.rows.size());
    out.it_power.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto slot = static_cast<std::size_t>(table.number(i, 0));
        if (slot != i)
            throw std::runtime_error(path + ":" + std::to_string(i + 2) +
                                     ": slots must be consecutive from 0");
        out.ambient.push_back(table.number(i, 1));
        out.it_power.push_back(table.number(i, 2));
    }
    return out;
}

}  // namespace vbatt
