#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gne/first_order.hpp"
#include "gne/kkt.hpp"
#include "gne/zero_order.hpp"

namespace gne {

enum class Method { first_order, zero_order };

/// Step-schedule request; `global-auto` is resolved against μ_F once the system is assembled.
struct ScheduleSpec {
    enum class Kind { paper_example, global, global_auto, per_coordinate };
    Kind kind = Kind::paper_example;
    double g = 0.0;       ///< global: multiplier; global_auto: factor in g = factor/μ_F
    double t0 = 0.0;
    std::vector<StepRate> rates;

    StepSchedule resolve(const KktSystem& sys) const;
};

/// Parses "paper-example", "global:G,T0" or "global-auto:FACTOR,T0".
/// Throws std::invalid_argument on anything else.
ScheduleSpec parse_schedule_spec(const std::string& text);

struct RunConfig {
    std::string game;
    Method method = Method::zero_order;

    FoConfig first_order;

    double sigma = 0.05;
    double delta = 0.05;
    std::size_t iterations = 10'000;
    ScheduleSpec schedule;

    std::vector<std::uint64_t> seeds;
    std::optional<std::string> trace_dir;
    std::size_t trace_every = 1;
    std::optional<Vector> reference;
    bool reference_from_oracle = false;
    std::size_t threads = 0;  ///< 0: hardware concurrency
};

/// Base seed: $GNE_SEED when set to an unsigned integer, otherwise 1.
std::uint64_t default_base_seed();

/// `count` consecutive seeds starting at `base`.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

/// Reads the run document
///   { "game": "...", "method": "first-order"|"zero-order",
///     "params": { "T", "sigma", "delta", "schedule", "step", "max_iters", "stop_gap", "reference" },
///     "seeds": [..] | count,
///     "trace": { "dir": "...", "every": k } }
/// `schedule` is a preset string or {"per_coordinate": [{"c":..,"t0":..}, ...]}.
/// `reference` is an array or the string "oracle". Throws ParseError.
RunConfig parse_run_config(const std::string& text);

}  // namespace gne
