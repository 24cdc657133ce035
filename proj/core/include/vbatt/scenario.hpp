#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vbatt/battery.hpp"

namespace vbatt {

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool operator==(const Range&) const = default;
};

// Synthetic-scenario parameters. Defaults are the desk-scale experiment:
// 30 days of hourly slots, prices 0.5-1.5 $/kWh, demand 10-20 MWh,
// renewable 0-3 MWh, battery rates 100-200 kWh and SoC window drawn from
// [1000,2000] x [3000,4000].
struct ScenarioConfig {
    std::size_t horizon = 720;
    std::uint64_t seed = 1;
    Range price_range{0.5, 1.5};
    Range demand_range{10000.0, 20000.0};
    Range renewable_range{0.0, 3000.0};
    Range b_char_range{100.0, 200.0};
    Range b_dis_range{100.0, 200.0};
    Range b_min_range{1000.0, 2000.0};
    Range b_max_range{3000.0, 4000.0};
    double r_max = 3000.0;

    bool operator==(const ScenarioConfig&) const = default;
};

// Throws std::invalid_argument naming the broken invariant: lo <= hi in
// every range, renewable_range.hi <= r_max, and
// b_min_range.hi <= b_max_range.lo (keeps realized SoC windows usable).
void validate(const ScenarioConfig& cfg);

// One realized scenario: price, renewable, demand, and per-slot battery
// spec, all the same length.
struct Trace {
    std::vector<double> price;      // P(t), $/kWh
    std::vector<double> renewable;  // R(t), kWh
    std::vector<double> demand;     // E(t), kWh
    SpecSeries specs;

    std::size_t horizon() const { return price.size(); }
    bool operator==(const Trace&) const = default;
};

// Name of the pseudo-random scheme behind generate(): mt19937_64 raw
// output mapped to [0,1) by taking the top 53 bits. Recorded in reports
// so any trace is reproducible from (name, seed, config).
inline constexpr const char* kGeneratorName = "mt19937_64/u53";

// Draws each series i.i.d. uniform over its range from a single
// mt19937_64 stream seeded by cfg.seed. Series are drawn whole, in
// order: price, renewable, demand, b_char, b_dis, b_min, b_max.
// Identical configs produce bitwise-identical traces.
Trace generate(const ScenarioConfig& cfg);

// Envelope the experiment declares up front, from the configured ranges
// rather than any realized trace: worst-case rates and SoC window plus
// the price cap.
EnvelopeConstants declared_envelope(const ScenarioConfig& cfg);

// Envelope measured from a realized trace; the price cap is the maximum
// observed price.
EnvelopeConstants realized_envelope(const Trace& trace);

// Trace CSV: header `slot,price,renewable,demand,b_char,b_dis,b_min,b_max`,
// one row per slot, '.' decimal floats, newline-terminated. Loaded specs
// carry alpha = 1.
void write_trace_csv(const Trace& trace, const std::string& path);

// Parses and validates a trace CSV. Violations (negative price or
// demand, renewable outside [0, r_max], ragged or malformed rows, empty
// body) throw with the offending row number.
Trace load_trace(const std::string& path,
                 double r_max = std::numeric_limits<double>::infinity());

}  // namespace vbatt
