#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gne/first_order.hpp"
#include "gne/game.hpp"
#include "gne/kkt.hpp"
#include "gne/zero_order_player.hpp"

namespace gne {

/// γ(t) = c / (t + t0)
struct StepRate {
    double c = 0.0;
    double t0 = 0.0;
    double at(std::size_t t) const noexcept { return c / (static_cast<double>(t) + t0); }
};

/// Diminishing step sizes, either one rate for every coordinate of z = [x, λ]
/// or one rate per coordinate.
class StepSchedule {
public:
    static StepSchedule global(double g, double t0);
    static StepSchedule per_coordinate(std::vector<StepRate> rates);
    /// Rates of the bundled two-player example: x coordinates 0.006, 0.005, 0.015, 0.009
    /// over (t + 500); all three multipliers 0.001 over (t + 1000).
    static StepSchedule paper_example();

    bool is_global() const noexcept { return global_; }
    const std::vector<StepRate>& rates() const noexcept { return rates_; }
    double step(std::size_t coordinate, std::size_t t) const;
    /// Throws std::invalid_argument when rates are not positive or the per-coordinate
    /// list does not match the length of z.
    void check(std::size_t z_dim) const;

private:
    std::vector<StepRate> rates_;
    bool global_ = true;
};

struct ZoConfig {
    double sigma = 0.05;
    double delta = 0.05;
    StepSchedule schedule = StepSchedule::paper_example();
    std::size_t iterations = 10'000;
    std::uint64_t seed = 0;
    std::size_t trace_every = 1;
    std::optional<Vector> reference_x;
    /// Order in which players run their round; empty means 0..n−1. Results do not depend on it.
    std::vector<std::size_t> player_order;
};

/// Gaussian directions of one round, laid out like x and λ.
struct RoundSample {
    Vector xi_x;
    Vector xi_lambda;
    Vector eta;
};

/// Round t draws player i's ξ_x^i, ξ_λ^i, η^i from child streams (seed, t, i, role),
/// so adding a player leaves the other players' draws unchanged.
RoundSample draw_round_sample(const KktSystem& sys, std::uint64_t seed, std::size_t t);

struct EstimatorRound {
    RoundSample sample;
    std::vector<PlayerRoundResult> players;
    Broadcast broadcast;
    std::vector<PlayerEstimate> estimates;
    Vector zeta;  ///< stacked like z
};

/// One synchronous round of the four-point estimator at z. All query points are built
/// from the same frozen joint action; `sys` supplies only the coordinate layout.
EstimatorRound run_estimator_round(const std::vector<const PlayerOracle*>& oracles, const KktSystem& sys,
                                   const PrimalDual& z, RoundSample sample, double sigma, double delta,
                                   std::span<const std::size_t> player_order = {});

struct ZoRecord {
    std::size_t t = 0;
    double gamma_ref = 0.0;  ///< step of z-coordinate 0 used in round t (0 at t = 0)
    double gap = 0.0;
    std::optional<double> x_dist;
    double lambda_norm = 0.0;
};

struct ZoResult {
    PrimalDual z;
    std::vector<ZoRecord> trace;
};

/// Runs cfg.iterations rounds (t = 1, 2, …) and records t = 0, every multiple of
/// trace_every, and the final round. Throws DivergenceError on a non-finite iterate.
ZoResult solve_zero_order(const QuadraticGame& game, const KktSystem& sys, PrimalDual z0, const ZoConfig& cfg);

}  // namespace gne
