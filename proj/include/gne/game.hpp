#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gne/numerics.hpp"
#include "gne/player_oracle.hpp"

namespace gne {

/// How the n·d coordinates of the joint action are assigned to players.
///  blocked:     player i owns coordinates i·d, …, i·d + d − 1
///  interleaved: player i owns coordinates i, i + n, …, i + (d − 1)·n
enum class ActionLayout { blocked, interleaved };

std::string to_string(ActionLayout layout);
std::optional<ActionLayout> parse_layout(const std::string& name);

/// J_i(x) = ½xᵀQx + rᵀx + k, constraint set A·x = b.
struct PlayerData {
    Matrix q;  ///< nd × nd
    Vector r;  ///< nd
    double k = 0.0;
    Matrix a;  ///< m_i × nd (empty when m_i = 0)
    Vector b;  ///< m_i

    std::size_t constraint_count() const noexcept { return b.size(); }
};

class QuadraticGame {
public:
    QuadraticGame(std::size_t n, std::size_t d, std::vector<PlayerData> players,
                  ActionLayout layout = ActionLayout::blocked);

    std::size_t players_count() const noexcept { return n_; }
    std::size_t action_dim() const noexcept { return d_; }
    /// n·d
    std::size_t joint_dim() const noexcept { return n_ * d_; }
    /// m = Σ m_i
    std::size_t constraint_dim() const noexcept;
    ActionLayout layout() const noexcept { return layout_; }

    const PlayerData& player(std::size_t i) const { return players_.at(i); }
    const std::vector<PlayerData>& players() const noexcept { return players_; }

    /// Joint-action coordinates controlled by player i, ascending.
    const std::vector<std::size_t>& own_indices(std::size_t i) const { return own_.at(i); }
    /// Same game with a different coordinate ownership.
    QuadraticGame with_layout(ActionLayout layout) const;

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<PlayerData> players_;
    ActionLayout layout_;
    std::vector<std::vector<std::size_t>> own_;
};

struct ValidationIssue {
    enum class Kind { dimension, non_finite, symmetry, convexity };
    Kind kind;
    std::optional<std::size_t> player;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const noexcept { return issues.empty(); }
    std::string to_text() const;
};

/// Checks dimensions, finiteness, symmetry of Q_i (1e-12 relative) and convexity of
/// J_i in the player's own coordinates. Reports every violation; never throws.
ValidationReport validate(const QuadraticGame& game);

double eval_cost(const QuadraticGame& game, std::size_t i, std::span<const double> x);
Vector eval_residual(const QuadraticGame& game, std::size_t i, std::span<const double> x);

/// PlayerOracle backed by a game. Holds a reference; the game must outlive it.
class GamePlayerOracle final : public PlayerOracle {
public:
    GamePlayerOracle(const QuadraticGame& game, std::size_t player) : game_(&game), player_(player) {}

    double cost(std::span<const double> x) const override { return eval_cost(*game_, player_, x); }
    Vector residual(std::span<const double> x) const override { return eval_residual(*game_, player_, x); }

private:
    const QuadraticGame* game_;
    std::size_t player_;
};

std::vector<GamePlayerOracle> make_oracles(const QuadraticGame& game);

/// Jacobian of the pseudo-gradient M(x) = [∇_{x^1}J_1, …, ∇_{x^n}J_n]: row k is
/// row k of ½(Q_i + Q_iᵀ) for the owner i of coordinate k.
Matrix pseudo_gradient_jacobian(const QuadraticGame& game);

struct MonotonicityReport {
    double mu = 0.0;  ///< λ_min of the symmetric part of the Jacobian
    bool is_monotone = false;
};

MonotonicityReport pseudo_gradient_monotonicity(const QuadraticGame& game);

}  // namespace gne
