#include "gne/run_config.hpp"

#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "gne/game_io.hpp"

namespace gne {

namespace {

using nlohmann::json;

std::pair<double, double> two_numbers(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument(what + ": expected two comma-separated numbers");
    try {
        std::size_t used = 0;
        const double a = std::stod(text.substr(0, comma), &used);
        const double b = std::stod(text.substr(comma + 1), &used);
        return {a, b};
    } catch (const std::logic_error&) {
        throw std::invalid_argument(what + ": expected two comma-separated numbers");
    }
}

double number_at(const json& obj, const char* key) {
    if (!obj.at(key).is_number()) throw ParseError(std::string(key) + ": expected a number");
    return obj.at(key).get<double>();
}

std::size_t count_at(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ParseError(std::string(key) + ": expected a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

StepSchedule ScheduleSpec::resolve(const KktSystem& sys) const {
    switch (kind) {
        case Kind::paper_example: return StepSchedule::paper_example();
        case Kind::global: return StepSchedule::global(g, t0);
        case Kind::global_auto: return StepSchedule::global(g / sys.mu_f, t0);
        case Kind::per_coordinate: return StepSchedule::per_coordinate(rates);
    }
    throw std::logic_error("unknown schedule kind");
}

ScheduleSpec parse_schedule_spec(const std::string& text) {
    ScheduleSpec spec;
    if (text == "paper-example") return spec;
    if (text.rfind("global-auto:", 0) == 0) {
        spec.kind = ScheduleSpec::Kind::global_auto;
        std::tie(spec.g, spec.t0) = two_numbers(text.substr(12), "global-auto");
        return spec;
    }
    if (text.rfind("global:", 0) == 0) {
        spec.kind = ScheduleSpec::Kind::global;
        std::tie(spec.g, spec.t0) = two_numbers(text.substr(7), "global");
        return spec;
    }
    throw std::invalid_argument("unknown schedule '" + text + "' (paper-example, global:G,T0, global-auto:FACTOR,T0)");
}

std::uint64_t default_base_seed() {
    if (const char* env = std::getenv("GNE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
        }
    }
    return 1;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t k = 0; k < count; ++k) seeds[k] = base + k;
    return seeds;
}

RunConfig parse_run_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed run config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("run config must be a JSON object");

    RunConfig cfg;
    try {
        if (doc.contains("game")) cfg.game = doc.at("game").get<std::string>();
        if (doc.contains("method")) {
            const auto m = doc.at("method").get<std::string>();
            if (m == "first-order") cfg.method = Method::first_order;
            else if (m == "zero-order") cfg.method = Method::zero_order;
            else throw ParseError("method: expected 'first-order' or 'zero-order'");
        }
        if (doc.contains("params")) {
            const auto& p = doc.at("params");
            if (p.contains("T")) cfg.iterations = count_at(p, "T");
            if (p.contains("sigma")) cfg.sigma = number_at(p, "sigma");
            if (p.contains("delta")) cfg.delta = number_at(p, "delta");
            if (p.contains("step")) cfg.first_order.step = number_at(p, "step");
            if (p.contains("max_iters")) cfg.first_order.max_iters = count_at(p, "max_iters");
            if (p.contains("stop_gap")) cfg.first_order.stop_gap = number_at(p, "stop_gap");
            if (p.contains("schedule")) {
                const auto& s = p.at("schedule");
                if (s.is_string()) {
                    cfg.schedule = parse_schedule_spec(s.get<std::string>());
                } else if (s.is_object() && s.contains("per_coordinate")) {
                    cfg.schedule.kind = ScheduleSpec::Kind::per_coordinate;
                    for (const auto& r : s.at("per_coordinate")) cfg.schedule.rates.push_back({number_at(r, "c"), number_at(r, "t0")});
                } else {
                    throw ParseError("schedule: expected a preset string or {\"per_coordinate\": [...]}");
                }
            }
            if (p.contains("reference")) {
                const auto& r = p.at("reference");
                if (r.is_string() && r.get<std::string>() == "oracle") cfg.reference_from_oracle = true;
                else cfg.reference = r.get<Vector>();
            }
        }
        if (doc.contains("seeds")) {
            const auto& s = doc.at("seeds");
            if (s.is_array()) cfg.seeds = s.get<std::vector<std::uint64_t>>();
            else cfg.seeds = seed_range(default_base_seed(), count_at(doc, "seeds"));
        }
        if (doc.contains("trace")) {
            const auto& t = doc.at("trace");
            if (t.contains("dir")) cfg.trace_dir = t.at("dir").get<std::string>();
            if (t.contains("every")) cfg.trace_every = count_at(t, "every");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("run config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("run config: ") + e.what());
    }
    return cfg;
}

}  // namespace gne
