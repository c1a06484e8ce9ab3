#include "gne/zero_order.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace gne {

namespace {

enum Role : std::uint64_t { kXiX = 0, kXiLambda = 1, kEta = 2 };

}  // namespace

StepSchedule StepSchedule::global(double g, double t0) {
    StepSchedule s;
    s.rates_ = {{g, t0}};
    s.global_ = true;
    return s;
}

StepSchedule StepSchedule::per_coordinate(std::vector<StepRate> rates) {
    StepSchedule s;
    s.rates_ = std::move(rates);
    s.global_ = false;
    return s;
}

StepSchedule StepSchedule::paper_example() {
    return per_coordinate({{0.006, 500}, {0.005, 500}, {0.015, 500}, {0.009, 500},
                           {0.001, 1000}, {0.001, 1000}, {0.001, 1000}});
}

double StepSchedule::step(std::size_t coordinate, std::size_t t) const {
    return global_ ? rates_.front().at(t) : rates_.at(coordinate).at(t);
}

void StepSchedule::check(std::size_t z_dim) const {
    if (rates_.empty()) throw std::invalid_argument("step schedule is empty");
    if (!global_ && rates_.size() != z_dim)
        throw std::invalid_argument("per-coordinate schedule has " + std::to_string(rates_.size()) +
                                    " rates, z has " + std::to_string(z_dim) + " coordinates");
    for (const auto& r : rates_)
        if (!(r.c > 0.0) || !(r.t0 >= 0.0) || !std::isfinite(r.c) || !std::isfinite(r.t0))
            throw std::invalid_argument("step rates need c > 0 and t0 >= 0");
}

RoundSample draw_round_sample(const KktSystem& sys, std::uint64_t seed, std::size_t t) {
    const std::size_t nx = sys.primal_dim();
    RoundSample s{Vector(nx), Vector(sys.dual_dim()), Vector(nx)};
    for (std::size_t i = 0; i < sys.players_count(); ++i) {
        const auto& own = sys.x_indices[i];
        RngStream xi_stream(derive_seed(seed, {t, i, kXiX}));
        RngStream eta_stream(derive_seed(seed, {t, i, kEta}));
        for (std::size_t c : own) s.xi_x[c] = xi_stream.standard_normal();
        for (std::size_t c : own) s.eta[c] = eta_stream.standard_normal();
        RngStream lam_stream(derive_seed(seed, {t, i, kXiLambda}));
        for (std::size_t k = sys.lambda_offsets[i]; k < sys.lambda_offsets[i + 1]; ++k)
            s.xi_lambda[k] = lam_stream.standard_normal();
    }
    return s;
}

EstimatorRound run_estimator_round(const std::vector<const PlayerOracle*>& oracles, const KktSystem& sys,
                                   const PrimalDual& z, RoundSample sample, double sigma, double delta,
                                   std::span<const std::size_t> player_order) {
    const std::size_t n = sys.players_count();
    const std::size_t d = sys.action_dim;
    if (oracles.size() != n) throw DimensionError("run_estimator_round: one oracle per player required");

    std::vector<std::size_t> natural;
    if (player_order.empty()) {
        natural.resize(n);
        std::iota(natural.begin(), natural.end(), 0);
        player_order = natural;
    }

    EstimatorRound round;
    round.sample = std::move(sample);
    const auto& smp = round.sample;
    const QueryPoints points = build_query_points(z.x(), sigma, delta, smp.xi_x, smp.eta);

    auto own_block = [&](const Vector& v, std::size_t i) {
        Vector out;
        out.reserve(d);
        for (std::size_t c : sys.x_indices[i]) out.push_back(v[c]);
        return out;
    };
    auto lambda_span = [&](const Vector& v, std::size_t i) {
        return std::span<const double>(v).subspan(sys.lambda_offsets[i], sys.lambda_offsets[i + 1] - sys.lambda_offsets[i]);
    };

    std::vector<Vector> eta_own(n), xi_own(n);
    for (std::size_t i = 0; i < n; ++i) {
        eta_own[i] = own_block(smp.eta, i);
        xi_own[i] = own_block(smp.xi_x, i);
    }

    AggregatorBus bus(n);
    round.players.resize(n);
    for (std::size_t i : player_order) {
        round.players[i] = player_round(*oracles[i], i, sys.lambda_block(z, i), points, lambda_span(smp.xi_lambda, i),
                                        eta_own[i], sigma, delta, d);
        bus.submit(i, round.players[i].contribution);
    }
    round.broadcast = bus.aggregate();

    round.zeta.assign(z.size(), 0.0);
    const std::size_t nx = sys.primal_dim();
    round.estimates.resize(n);
    for (std::size_t i : player_order) {
        round.estimates[i] =
            estimate(round.broadcast, round.players[i], xi_own[i], eta_own[i], lambda_span(smp.xi_lambda, i));
        const auto& own = sys.x_indices[i];
        for (std::size_t k = 0; k < own.size(); ++k) round.zeta[own[k]] = round.estimates[i].x[k];
        for (std::size_t k = 0; k < round.estimates[i].lambda.size(); ++k)
            round.zeta[nx + sys.lambda_offsets[i] + k] = round.estimates[i].lambda[k];
    }
    return round;
}

ZoResult solve_zero_order(const QuadraticGame& game, const KktSystem& sys, PrimalDual z0, const ZoConfig& cfg) {
    if (z0.size() != sys.g.cols()) throw DimensionError("solve_zero_order: z0 has the wrong length");
    if (!(cfg.sigma > 0.0) || !(cfg.delta > 0.0) || !std::isfinite(cfg.sigma) || !std::isfinite(cfg.delta))
        throw std::invalid_argument("solve_zero_order: sigma and delta must be finite and positive");
    if (cfg.iterations < 1) throw std::invalid_argument("solve_zero_order: iterations must be >= 1");
    cfg.schedule.check(z0.size());
    if (cfg.reference_x && cfg.reference_x->size() != z0.primal_dim())
        throw DimensionError("solve_zero_order: reference solution has the wrong length");
    if (!cfg.player_order.empty()) {
        std::vector<bool> seen(game.players_count(), false);
        for (std::size_t i : cfg.player_order) {
            if (i >= seen.size() || seen[i]) throw std::invalid_argument("player_order is not a permutation");
            seen[i] = true;
        }
        if (cfg.player_order.size() != seen.size()) throw std::invalid_argument("player_order is not a permutation");
    }

    const auto game_oracles = make_oracles(game);
    std::vector<const PlayerOracle*> oracles;
    for (const auto& o : game_oracles) oracles.push_back(&o);

    const std::size_t stride = std::max<std::size_t>(1, cfg.trace_every);
    ZoResult res{std::move(z0), {}};
    auto record = [&](std::size_t t, double gamma) {
        ZoRecord rec;
        rec.t = t;
        rec.gamma_ref = gamma;
        rec.gap = gap(sys, res.z);
        if (cfg.reference_x) {
            double s = 0.0;
            for (std::size_t k = 0; k < res.z.primal_dim(); ++k) {
                const double diff = res.z.x()[k] - (*cfg.reference_x)[k];
                s += diff * diff;
            }
            rec.x_dist = std::sqrt(s);
        }
        rec.lambda_norm = norm(res.z.lambda());
        res.trace.push_back(rec);
    };
    record(0, 0.0);

    auto z = res.z.stacked();
    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        EstimatorRound round;
        try {
            round = run_estimator_round(oracles, sys, res.z, draw_round_sample(sys, cfg.seed, t), cfg.sigma,
                                        cfg.delta, cfg.player_order);
        } catch (const OracleFault& fault) {
            throw DivergenceError(std::string("zero-order iterate diverged: ") + fault.what(), t);
        }
        for (std::size_t k = 0; k < z.size(); ++k) z[k] -= cfg.schedule.step(k, t) * round.zeta[k];
        if (!all_finite(z)) throw DivergenceError("zero-order iterate diverged at t = " + std::to_string(t), t);
        if (t % stride == 0 || t == cfg.iterations) record(t, cfg.schedule.step(0, t));
    }
    return res;
}

}  // namespace gne
