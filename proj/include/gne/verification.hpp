#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gne/game.hpp"
#include "gne/kkt.hpp"
#include "gne/numerics.hpp"

namespace gne {

struct CheckItem {
    std::string label;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Result of one audit. Items are asserted; metrics are descriptive only.
struct CheckReport {
    std::string name;
    std::vector<CheckItem> items;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;
    /// Number of failing items tolerated before the report fails (statistical audits).
    std::size_t allowed_failures = 0;

    std::size_t failures() const noexcept;
    bool pass() const noexcept { return failures() <= allowed_failures; }

    std::string to_text() const;
    nlohmann::json to_json() const;
};

/// Central differences of F at `points` random z (plus one minimizer) against ∇F.
/// Per component: |fd − grad| ≤ 1e-6·max(1, ‖∇F(z)‖).
CheckReport fd_gradient_check(const KktSystem& sys, std::size_t points, double h, RngStream& rng);

struct EstimatorAuditOptions {
    double sigma = 0.05;
    double delta = 0.05;
    std::size_t rounds = 200'000;
    std::uint64_t seed = 1;
    double band = 4.0;       ///< k in |mean − ∇F| ≤ k·stderr
    std::size_t retries = 1;  ///< fresh-seed reruns after a failing pass
};

/// Monte-Carlo mean of ζ over `rounds` independent rounds at a fixed z, compared with
/// ∇F(z) component-wise; allows floor(components/100) band violations. Reports the
/// empirical E‖ζ_{x^i}‖² and E‖ζ_{λ^i}‖² as metrics.
CheckReport estimator_audit(const QuadraticGame& game, const KktSystem& sys, const PrimalDual& z,
                            const EstimatorAuditOptions& opts);

struct IdentityCell {
    std::size_t n = 1;
    std::size_t d = 1;
    std::size_t block = 0;
};

/// Default grid: (n, d) ∈ {(1,1), (2,2), (3,1), (2,3)} with every block j.
std::vector<IdentityCell> default_identity_grid();

/// gaussian_identity_check over each cell with random a, b (from rng); 5·stderr bands.
/// Throws std::invalid_argument when samples < 1e5.
CheckReport identity_audit(const std::vector<IdentityCell>& grid, std::size_t samples, RngStream& rng);

struct SolutionOracleResult {
    PrimalDual z_bar;
    double residual = 0.0;  ///< F(z̄)
    double threshold = 0.0; ///< 1e-10·(1 + ‖e‖²)
    std::size_t kernel_dim = 0;
    bool gne_exists = false;  ///< residual ≤ threshold
};

/// z̄ = min-norm least-squares solution of G·z = −e.
SolutionOracleResult solution_oracle(const KktSystem& sys);

}  // namespace gne
