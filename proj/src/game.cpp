#include "gne/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gne {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-10;

std::vector<std::vector<std::size_t>> ownership(std::size_t n, std::size_t d, ActionLayout layout) {
    std::vector<std::vector<std::size_t>> own(n);
    for (std::size_t i = 0; i < n; ++i) {
        own[i].reserve(d);
        for (std::size_t k = 0; k < d; ++k)
            own[i].push_back(layout == ActionLayout::blocked ? i * d + k : i + k * n);
        std::sort(own[i].begin(), own[i].end());
    }
    return own;
}

void check_joint(const QuadraticGame& game, std::size_t i, std::span<const double> x) {
    if (i >= game.players_count()) throw std::out_of_range("player index out of range");
    if (x.size() != game.joint_dim())
        throw DimensionError("joint action has length " + std::to_string(x.size()) + ", expected " +
                             std::to_string(game.joint_dim()));
}

}  // namespace

std::string to_string(ActionLayout layout) {
    return layout == ActionLayout::blocked ? "blocked" : "interleaved";
}

std::optional<ActionLayout> parse_layout(const std::string& name) {
    if (name == "blocked") return ActionLayout::blocked;
    if (name == "interleaved") return ActionLayout::interleaved;
    return std::nullopt;
}

QuadraticGame::QuadraticGame(std::size_t n, std::size_t d, std::vector<PlayerData> players, ActionLayout layout)
    : n_(n), d_(d), players_(std::move(players)), layout_(layout), own_(ownership(n, d, layout)) {}

std::size_t QuadraticGame::constraint_dim() const noexcept {
    std::size_t m = 0;
    for (const auto& p : players_) m += p.constraint_count();
    return m;
}

QuadraticGame QuadraticGame::with_layout(ActionLayout layout) const {
    return QuadraticGame(n_, d_, players_, layout);
}

std::string ValidationReport::to_text() const {
    if (ok()) return "valid\n";
    std::ostringstream os;
    for (const auto& issue : issues) {
        os << "invalid";
        if (issue.player) os << " [player " << (*issue.player + 1) << "]";
        os << ": " << issue.message << '\n';
    }
    return os.str();
}

ValidationReport validate(const QuadraticGame& game) {
    ValidationReport rep;
    auto add = [&](ValidationIssue::Kind kind, std::optional<std::size_t> player, std::string msg) {
        rep.issues.push_back({kind, player, std::move(msg)});
    };
    using K = ValidationIssue::Kind;

    const std::size_t n = game.players_count();
    const std::size_t d = game.action_dim();
    if (n == 0) add(K::dimension, std::nullopt, "n must be >= 1");
    if (d == 0) add(K::dimension, std::nullopt, "d must be >= 1");
    if (game.players().size() != n)
        add(K::dimension, std::nullopt,
            "expected " + std::to_string(n) + " players, found " + std::to_string(game.players().size()));
    if (!rep.ok()) return rep;

    const std::size_t nd = game.joint_dim();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = game.player(i);
        bool shapes_ok = true;
        auto dim_issue = [&](std::string msg) {
            add(K::dimension, i, std::move(msg));
            shapes_ok = false;
        };
        if (p.q.rows() != nd || p.q.cols() != nd)
            dim_issue("Q is " + std::to_string(p.q.rows()) + "x" + std::to_string(p.q.cols()) + ", expected " +
                      std::to_string(nd) + "x" + std::to_string(nd));
        if (p.r.size() != nd) dim_issue("r has length " + std::to_string(p.r.size()) + ", expected " + std::to_string(nd));
        const std::size_t m = p.constraint_count();
        if (m > 0 && (p.a.rows() != m || p.a.cols() != nd))
            dim_issue("A is " + std::to_string(p.a.rows()) + "x" + std::to_string(p.a.cols()) + ", expected " +
                      std::to_string(m) + "x" + std::to_string(nd));
        if (m == 0 && !p.a.empty()) dim_issue("A has rows but b is empty");

        if (!p.q.all_finite() || !all_finite(p.r) || !std::isfinite(p.k) || !p.a.all_finite() || !all_finite(p.b)) {
            add(K::non_finite, i, "non-finite entry in player data");
            continue;
        }
        if (!shapes_ok) continue;

        const double scale = std::max(1.0, p.q.max_abs());
        double asym = 0.0;
        for (std::size_t r = 0; r < nd; ++r)
            for (std::size_t c = r + 1; c < nd; ++c) asym = std::max(asym, std::abs(p.q(r, c) - p.q(c, r)));
        if (asym > kSymmetryTol * scale) {
            std::ostringstream os;
            os << "Q is not symmetric (max |Q_ab - Q_ba| = " << asym << ")";
            add(K::symmetry, i, os.str());
        }

        const auto& own = game.own_indices(i);
        Matrix block(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) block(a, b) = 0.5 * (p.q(own[a], own[b]) + p.q(own[b], own[a]));
        const double lmin = symmetric_eigen(block).values.front();
        if (lmin < -kPsdTol * scale) {
            std::ostringstream os;
            os << "J_i is not convex in the player's own action (own-block lambda_min = " << lmin << ")";
            add(K::convexity, i, os.str());
        }
    }
    return rep;
}

double eval_cost(const QuadraticGame& game, std::size_t i, std::span<const double> x) {
    check_joint(game, i, x);
    const auto& p = game.player(i);
    const Vector qx = matvec(p.q, x);
    return 0.5 * dot(x, qx) + dot(p.r, x) + p.k;
}

Vector eval_residual(const QuadraticGame& game, std::size_t i, std::span<const double> x) {
    check_joint(game, i, x);
    const auto& p = game.player(i);
    if (p.constraint_count() == 0) return {};
    Vector res = matvec(p.a, x);
    for (std::size_t k = 0; k < res.size(); ++k) res[k] -= p.b[k];
    return res;
}

std::vector<GamePlayerOracle> make_oracles(const QuadraticGame& game) {
    std::vector<GamePlayerOracle> out;
    out.reserve(game.players_count());
    for (std::size_t i = 0; i < game.players_count(); ++i) out.emplace_back(game, i);
    return out;
}

Matrix pseudo_gradient_jacobian(const QuadraticGame& game) {
    const std::size_t nd = game.joint_dim();
    Matrix jac(nd, nd);
    for (std::size_t i = 0; i < game.players_count(); ++i) {
        const auto& q = game.player(i).q;
        for (std::size_t row : game.own_indices(i))
            for (std::size_t c = 0; c < nd; ++c) jac(row, c) = 0.5 * (q(row, c) + q(c, row));
    }
    return jac;
}

MonotonicityReport pseudo_gradient_monotonicity(const QuadraticGame& game) {
    const Matrix jac = pseudo_gradient_jacobian(game);
    MonotonicityReport rep;
    rep.mu = symmetric_eigen(symmetric_part(jac)).values.front();
    rep.is_monotone = rep.mu >= -kPsdTol * std::max(1.0, jac.max_abs());
    return rep;
}

}  // namespace gne
