#pragma once

#include <span>

#include "gne/numerics.hpp"

namespace gne {

/// Zero-order information available to one player: the value of their own cost
/// and the residual of their own constraints at a queried joint action. Nothing
/// else about the game is reachable through this interface.
class PlayerOracle {
public:
    virtual ~PlayerOracle() = default;

    /// J_i(x) at the joint action x.
    virtual double cost(std::span<const double> x) const = 0;
    /// A_i·x − b_i, length m_i.
    virtual Vector residual(std::span<const double> x) const = 0;
};

/// L_i(x, λ^i) = J_i(x) + ⟨λ^i, A_i·x − b_i⟩, built from the two oracle queries only.
double eval_lagrangian(const PlayerOracle& oracle, std::span<const double> x,
                       std::span<const double> lambda_i);

}  // namespace gne
