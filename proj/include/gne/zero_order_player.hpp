#pragma once

// Player-side and aggregator-side pieces of the zero-order procedure. Everything here
// sees a player only through PlayerOracle plus their own random directions, their own
// dual variable and the broadcast (S, D). This header must not depend on the game
// or KKT modules; the gne_player library links numerics alone.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gne/numerics.hpp"
#include "gne/player_oracle.hpp"

namespace gne {

/// x̃_1 = x − ση, x̃_2 = x + ση, x̃_3 = x + δξ_x − ση, x̃_4 = x + δξ_x + ση.
struct QueryPoints {
    Vector x1, x2, x3, x4;
};

QueryPoints build_query_points(std::span<const double> x, double sigma, double delta,
                               std::span<const double> xi_x, std::span<const double> eta);

/// An oracle returned NaN/Inf for this player.
class OracleFault : public std::runtime_error {
public:
    OracleFault(const std::string& what, std::size_t player) : std::runtime_error(what), player_(player) {}
    std::size_t player() const noexcept { return player_; }

private:
    std::size_t player_;
};

/// What a player sends to the aggregator: (½(S_2 − d·S_1), Δ_3).
struct Contribution {
    double half_increment = 0.0;
    double delta3 = 0.0;
};

struct PlayerRoundResult {
    double delta1 = 0.0;  ///< (L_i(y_2) − L_i(y_1)) / 2σ
    double delta2 = 0.0;  ///< (L_i(y_4) − L_i(y_3)) / 2σ
    double delta3 = 0.0;  ///< (c_i(x̃_2) − c_i(x̃_1)) / 2σ, c_i = ‖A_i x − b_i‖²
    double s1 = 0.0;      ///< (Δ_2² − Δ_1²) / δ
    double s2 = 0.0;      ///< S_1·‖η^i‖²
    Contribution contribution;
};

/// One player's four Lagrangian queries and derived scalars.
/// eta_own is η^i (the player's own block of η); lambda_i and xi_lambda_i have length m_i.
PlayerRoundResult player_round(const PlayerOracle& oracle, std::size_t player, std::span<const double> lambda_i,
                               const QueryPoints& points, std::span<const double> xi_lambda_i,
                               std::span<const double> eta_own, double sigma, double delta, std::size_t d);

/// Thrown when the aggregator is asked for sums before every player reported.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(const std::string& what, std::size_t player) : std::runtime_error(what), player_(player) {}
    std::size_t player() const noexcept { return player_; }

private:
    std::size_t player_;
};

/// S = Σ_j ½(S_2^{(j)} − d·S_1^{(j)}),  D = Σ_j Δ_3^{(j)}.
struct Broadcast {
    double s = 0.0;
    double d = 0.0;
};

/// Synchronous aggregator: one inbox slot per player, summed in player-index order
/// so the result does not depend on arrival order.
class AggregatorBus {
public:
    explicit AggregatorBus(std::size_t players) : inbox_(players) {}

    void submit(std::size_t player, Contribution c);
    bool complete() const noexcept;
    /// Throws ProtocolError naming the first player without a contribution.
    Broadcast aggregate() const;
    void reset() noexcept;

private:
    std::vector<std::optional<Contribution>> inbox_;
};

/// ζ_{x^i} = S·ξ_x^i + D·η^i  and  ζ_{λ^i} = ½(S_2^{(i)} − d·S_1^{(i)})·ξ_λ^i.
struct PlayerEstimate {
    Vector x;
    Vector lambda;
};

PlayerEstimate estimate(const Broadcast& bus, const PlayerRoundResult& own, std::span<const double> xi_x_own,
                        std::span<const double> eta_own, std::span<const double> xi_lambda_i);

}  // namespace gne
