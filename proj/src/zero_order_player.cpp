#include "gne/zero_order_player.hpp"

#include <cmath>
#include <string>

namespace gne {

double eval_lagrangian(const PlayerOracle& oracle, std::span<const double> x, std::span<const double> lambda_i) {
    const Vector res = oracle.residual(x);
    if (res.size() != lambda_i.size())
        throw DimensionError("eval_lagrangian: lambda_i has length " + std::to_string(lambda_i.size()) +
                             ", residual has " + std::to_string(res.size()));
    return oracle.cost(x) + dot(lambda_i, res);
}

QueryPoints build_query_points(std::span<const double> x, double sigma, double delta, std::span<const double> xi_x,
                               std::span<const double> eta) {
    if (xi_x.size() != x.size() || eta.size() != x.size())
        throw DimensionError("build_query_points: xi_x and eta must match x");
    QueryPoints q{Vector(x.size()), Vector(x.size()), Vector(x.size()), Vector(x.size())};
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double se = sigma * eta[k];
        const double shifted = x[k] + delta * xi_x[k];
        q.x1[k] = x[k] - se;
        q.x2[k] = x[k] + se;
        q.x3[k] = shifted - se;
        q.x4[k] = shifted + se;
    }
    return q;
}

PlayerRoundResult player_round(const PlayerOracle& oracle, std::size_t player, std::span<const double> lambda_i,
                               const QueryPoints& points, std::span<const double> xi_lambda_i,
                               std::span<const double> eta_own, double sigma, double delta, std::size_t d) {
    if (xi_lambda_i.size() != lambda_i.size())
        throw DimensionError("player_round: xi_lambda_i must match lambda_i");

    Vector shifted_lambda(lambda_i.size());
    for (std::size_t k = 0; k < lambda_i.size(); ++k) shifted_lambda[k] = lambda_i[k] + delta * xi_lambda_i[k];

    // Residuals at x̃_1, x̃_2 serve both L_i(y_1), L_i(y_2) and c_i.
    const Vector res1 = oracle.residual(points.x1);
    const Vector res2 = oracle.residual(points.x2);
    if (res1.size() != lambda_i.size()) throw DimensionError("player_round: lambda_i does not match residual length");
    const double l1 = oracle.cost(points.x1) + dot(lambda_i, res1);
    const double l2 = oracle.cost(points.x2) + dot(lambda_i, res2);
    const double l3 = eval_lagrangian(oracle, points.x3, shifted_lambda);
    const double l4 = eval_lagrangian(oracle, points.x4, shifted_lambda);
    if (!std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(l3) || !std::isfinite(l4) || !all_finite(res1) ||
        !all_finite(res2))
        throw OracleFault("non-finite oracle value for player " + std::to_string(player + 1), player);

    PlayerRoundResult r;
    r.delta1 = (l2 - l1) / (2.0 * sigma);
    r.delta2 = (l4 - l3) / (2.0 * sigma);
    r.delta3 = (squared_norm(res2) - squared_norm(res1)) / (2.0 * sigma);
    r.s1 = (r.delta2 * r.delta2 - r.delta1 * r.delta1) / delta;
    r.s2 = r.s1 * squared_norm(eta_own);
    r.contribution = {0.5 * (r.s2 - static_cast<double>(d) * r.s1), r.delta3};
    return r;
}

void AggregatorBus::submit(std::size_t player, Contribution c) { inbox_.at(player) = c; }

bool AggregatorBus::complete() const noexcept {
    for (const auto& slot : inbox_)
        if (!slot) return false;
    return true;
}

Broadcast AggregatorBus::aggregate() const {
    Broadcast out;
    for (std::size_t j = 0; j < inbox_.size(); ++j) {
        if (!inbox_[j]) throw ProtocolError("aggregator: missing contribution from player " + std::to_string(j + 1), j);
        out.s += inbox_[j]->half_increment;
        out.d += inbox_[j]->delta3;
    }
    return out;
}

void AggregatorBus::reset() noexcept {
    for (auto& slot : inbox_) slot.reset();
}

PlayerEstimate estimate(const Broadcast& bus, const PlayerRoundResult& own, std::span<const double> xi_x_own,
                        std::span<const double> eta_own, std::span<const double> xi_lambda_i) {
    if (xi_x_own.size() != eta_own.size()) throw DimensionError("estimate: xi_x and eta blocks differ in length");
    PlayerEstimate est{Vector(xi_x_own.size()), Vector(xi_lambda_i.size())};
    for (std::size_t k = 0; k < xi_x_own.size(); ++k) est.x[k] = bus.s * xi_x_own[k] + bus.d * eta_own[k];
    for (std::size_t k = 0; k < xi_lambda_i.size(); ++k) est.lambda[k] = own.contribution.half_increment * xi_lambda_i[k];
    return est;
}

}  // namespace gne
