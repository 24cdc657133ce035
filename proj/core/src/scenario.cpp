#include "vbatt/scenario.hpp"

#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "vbatt/csv.hpp"

namespace vbatt {

namespace {

// Top-53-bit mapping keeps the stream identical on every platform;
// std::uniform_real_distribution is not pinned by the standard.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double draw(const Range& range) { return range.lo + unit() * range.width(); }

private:
    std::mt19937_64 engine_;
};

void check_range(const Range& r, const char* name) {
    if (r.lo > r.hi)
        throw std::invalid_argument(std::string("scenario config: ") + name + ".lo > .hi");
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
    check_range(cfg.price_range, "price_range");
    check_range(cfg.demand_range, "demand_range");
    check_range(cfg.renewable_range, "renewable_range");
    check_range(cfg.b_char_range, "b_char_range");
    check_range(cfg.b_dis_range, "b_dis_range");
    check_range(cfg.b_min_range, "b_min_range");
    check_range(cfg.b_max_range, "b_max_range");
    if (cfg.price_range.lo < 0.0)
        throw std::invalid_argument("scenario config: negative prices not allowed");
    if (cfg.demand_range.lo < 0.0)
        throw std::invalid_argument("scenario config: negative demand not allowed");
    if (cfg.renewable_range.lo < 0.0)
        throw std::invalid_argument("scenario config: negative renewable not allowed");
    if (cfg.b_char_range.lo < 0.0 || cfg.b_dis_range.lo < 0.0)
        throw std::invalid_argument("scenario config: negative rate limits not allowed");
    if (cfg.renewable_range.hi > cfg.r_max)
        throw std::invalid_argument("scenario config: renewable_range.hi > r_max");
    if (cfg.b_min_range.hi > cfg.b_max_range.lo)
        throw std::invalid_argument("scenario config: b_min_range.hi > b_max_range.lo");
}

Trace generate(const ScenarioConfig& cfg) {
    validate(cfg);
    UniformStream rng(cfg.seed);
    const std::size_t T = cfg.horizon;

    auto series = [&rng, T](const Range& range) {
        std::vector<double> out(T);
        for (auto& x : out) x = rng.draw(range);
        return out;
    };

    Trace trace;
    trace.price = series(cfg.price_range);
    trace.renewable = series(cfg.renewable_range);
    trace.demand = series(cfg.demand_range);
    const auto b_char = series(cfg.b_char_range);
    const auto b_dis = series(cfg.b_dis_range);
    const auto b_min = series(cfg.b_min_range);
    const auto b_max = series(cfg.b_max_range);
    trace.specs.specs.resize(T);
    for (std::size_t t = 0; t < T; ++t)
        trace.specs.specs[t] = {b_char[t], b_dis[t], b_min[t], b_max[t], 1.0};
    return trace;
}

EnvelopeConstants declared_envelope(const ScenarioConfig& cfg) {
    validate(cfg);
    return {
        .b_char_max = cfg.b_char_range.hi,
        .b_dis_max = cfg.b_dis_range.hi,
        .b_min_bar = cfg.b_min_range.hi,
        .b_max_bar = cfg.b_max_range.lo,
        .p_max = cfg.price_range.hi,
    };
}

EnvelopeConstants realized_envelope(const Trace& trace) {
    double p_max = 0.0;
    for (double p : trace.price) p_max = std::max(p_max, p);
    return envelope(trace.specs, p_max);
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "slot,price,renewable,demand,b_char,b_dis,b_min,b_max\n";
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        const auto& s = trace.specs.specs[t];
        out << t << ',' << csv::format_double(trace.price[t]) << ','
            << csv::format_double(trace.renewable[t]) << ','
            << csv::format_double(trace.demand[t]) << ','
            << csv::format_double(s.b_char) << ',' << csv::format_double(s.b_dis) << ','
            << csv::format_double(s.b_min) << ',' << csv::format_double(s.b_max) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

Trace load_trace(const std::string& path, double r_max) {
    const auto table = csv::read_file(path);
    csv::require_header(table,
                        {"slot", "price", "renewable", "demand", "b_char", "b_dis",
                         "b_min", "b_max"});
    if (table.rows.empty()) throw std::runtime_error(path + ": trace has no rows");

    Trace trace;
    const std::size_t T = table.rows.size();
    trace.price.reserve(T);
    trace.renewable.reserve(T);
    trace.demand.reserve(T);
    trace.specs.specs.reserve(T);
    for (std::size_t i = 0; i < T; ++i) {
        const std::string where = path + ":" + std::to_string(i + 2);
        if (static_cast<std::size_t>(table.number(i, 0)) != i)
            throw std::runtime_error(where + ": slots must be consecutive from 0");
        const double price = table.number(i, 1);
        const double renewable = table.number(i, 2);
        const double demand = table.number(i, 3);
        if (price < 0.0) throw std::runtime_error(where + ": negative price");
        if (demand < 0.0) throw std::runtime_error(where + ": negative demand");
        if (renewable < 0.0) throw std::runtime_error(where + ": negative renewable");
        if (renewable > r_max)
            throw std::runtime_error(where + ": renewable exceeds r_max");
        VirtualBatterySpec spec{table.number(i, 4), table.number(i, 5),
                                table.number(i, 6), table.number(i, 7), 1.0};
        try {
            validate(spec);
        } catch (const std::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
        trace.price.push_back(price);
        trace.renewable.push_back(renewable);
        trace.demand.push_back(demand);
        trace.specs.specs.push_back(spec);
    }
    return trace;
}

}  // namespace vbatt
