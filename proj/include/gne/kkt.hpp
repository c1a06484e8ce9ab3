#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gne/game.hpp"
#include "gne/numerics.hpp"

namespace gne {

/// Primal-dual point z = [x, λ]; x in joint-action coordinates, λ stacked by player.
class PrimalDual {
public:
    PrimalDual() = default;
    PrimalDual(std::size_t primal_dim, std::size_t dual_dim) : z_(primal_dim + dual_dim, 0.0), nx_(primal_dim) {}
    PrimalDual(std::span<const double> x, std::span<const double> lambda);

    std::size_t primal_dim() const noexcept { return nx_; }
    std::size_t dual_dim() const noexcept { return z_.size() - nx_; }
    std::size_t size() const noexcept { return z_.size(); }

    std::span<double> x() noexcept { return {z_.data(), nx_}; }
    std::span<const double> x() const noexcept { return {z_.data(), nx_}; }
    std::span<double> lambda() noexcept { return {z_.data() + nx_, z_.size() - nx_}; }
    std::span<const double> lambda() const noexcept { return {z_.data() + nx_, z_.size() - nx_}; }

    /// [x; λ] as one vector.
    std::span<double> stacked() noexcept { return z_; }
    std::span<const double> stacked() const noexcept { return z_; }

    friend bool operator==(const PrimalDual&, const PrimalDual&) = default;

private:
    Vector z_;
    std::size_t nx_ = 0;
};

/// F(z) = ‖G·z + e‖² with
///   G = [[H_stk, Aᵀ_blk], [A_stk, 0]],  e = [r_stk; −b_stk].
/// Row block i of H_stk is H_i, the rows of ½(Q_i + Q_iᵀ) at player i's coordinates;
/// Aᵀ_blk = blkdiag(A_{i(i,:)}ᵀ) where A_{i(i,:)} is A_i restricted to player i's columns.
struct KktSystem {
    Matrix g;
    Vector e;
    std::vector<Matrix> h_blocks;                     ///< H_i, d × nd
    std::vector<std::vector<std::size_t>> x_indices;  ///< player i's joint-action coordinates
    std::vector<std::size_t> lambda_offsets;          ///< n + 1 entries into λ
    std::size_t action_dim = 0;
    double sigma_max = 0.0;
    double sigma_min_positive = 0.0;
    std::size_t kernel_dim = 0;
    double mu_f = 0.0;  ///< 2·σ_min⁺(G)²
    double l_f = 0.0;   ///< 2·σ_max(G)²

    std::size_t primal_dim() const noexcept { return x_indices.size() * action_dim; }
    std::size_t dual_dim() const noexcept { return lambda_offsets.empty() ? 0 : lambda_offsets.back(); }
    std::size_t players_count() const noexcept { return x_indices.size(); }

    Vector x_block(const PrimalDual& z, std::size_t i) const;
    std::span<const double> lambda_block(const PrimalDual& z, std::size_t i) const;
};

std::vector<Matrix> build_h_blocks(const QuadraticGame& game);

/// Throws NumericsError when G is numerically zero.
KktSystem assemble(const QuadraticGame& game);

/// G·z + e
Vector kkt_residual(const KktSystem& sys, std::span<const double> z);

double gap(const KktSystem& sys, std::span<const double> z);
double gap(const KktSystem& sys, const PrimalDual& z);

/// ∇F(z) = 2Gᵀ(G·z + e), stacked like z.
Vector gap_gradient(const KktSystem& sys, std::span<const double> z);
Vector gap_gradient(const KktSystem& sys, const PrimalDual& z);

struct PlayerPartials {
    Vector x;       ///< ∂F/∂x^i, d entries (player i's coordinates, ascending)
    Vector lambda;  ///< ∂F/∂λ^i, m_i entries
};

PlayerPartials gap_partials(const KktSystem& sys, const PrimalDual& z, std::size_t i);

struct GneCertificate {
    double gap = 0.0;
    double tolerance = 0.0;
    std::vector<double> stationarity_norms;  ///< ‖H_i x + r_i^i + A_{i(i,:)}ᵀλ^i‖
    std::vector<double> residual_norms;      ///< ‖A_i x − b_i‖
    bool accepted = false;
};

/// 1e-8·(1 + ‖e‖²)
double default_certification_tolerance(const KktSystem& sys);

/// Accepts iff gap ≤ tol. Throws std::invalid_argument when tol ≤ 0.
GneCertificate certify_gne(const KktSystem& sys, const PrimalDual& z, double tol);

}  // namespace gne
