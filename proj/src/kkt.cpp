#include "gne/kkt.hpp"

#include <algorithm>
#include <stdexcept>

namespace gne {

PrimalDual::PrimalDual(std::span<const double> x, std::span<const double> lambda)
    : z_(x.begin(), x.end()), nx_(x.size()) {
    z_.insert(z_.end(), lambda.begin(), lambda.end());
}

Vector KktSystem::x_block(const PrimalDual& z, std::size_t i) const {
    const auto& idx = x_indices.at(i);
    Vector out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = z.x()[idx[k]];
    return out;
}

std::span<const double> KktSystem::lambda_block(const PrimalDual& z, std::size_t i) const {
    const std::size_t lo = lambda_offsets.at(i);
    return z.lambda().subspan(lo, lambda_offsets.at(i + 1) - lo);
}

std::vector<Matrix> build_h_blocks(const QuadraticGame& game) {
    const std::size_t nd = game.joint_dim();
    const std::size_t d = game.action_dim();
    std::vector<Matrix> blocks;
    blocks.reserve(game.players_count());
    for (std::size_t i = 0; i < game.players_count(); ++i) {
        const auto& q = game.player(i).q;
        const auto& own = game.own_indices(i);
        Matrix h(d, nd);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t c = 0; c < nd; ++c) h(a, c) = 0.5 * (q(own[a], c) + q(c, own[a]));
        blocks.push_back(std::move(h));
    }
    return blocks;
}

KktSystem assemble(const QuadraticGame& game) {
    const std::size_t n = game.players_count();
    const std::size_t d = game.action_dim();
    const std::size_t nd = game.joint_dim();
    const std::size_t m = game.constraint_dim();

    KktSystem sys;
    sys.action_dim = d;
    sys.h_blocks = build_h_blocks(game);
    sys.g = Matrix(nd + m, nd + m);
    sys.e = Vector(nd + m, 0.0);
    sys.lambda_offsets.assign(1, 0);

    std::size_t lam = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = game.player(i);
        const auto& own = game.own_indices(i);
        const std::size_t mi = p.constraint_count();
        sys.x_indices.push_back(own);

        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t row = i * d + a;
            for (std::size_t c = 0; c < nd; ++c) sys.g(row, c) = sys.h_blocks[i](a, c);
            for (std::size_t k = 0; k < mi; ++k) sys.g(row, nd + lam + k) = p.a(k, own[a]);
            sys.e[row] = p.r[own[a]];
        }
        for (std::size_t k = 0; k < mi; ++k) {
            const std::size_t row = nd + lam + k;
            for (std::size_t c = 0; c < nd; ++c) sys.g(row, c) = p.a(k, c);
            sys.e[row] = -p.b[k];
        }
        lam += mi;
        sys.lambda_offsets.push_back(lam);
    }

    const auto sv = singular_values_extreme(sys.g);
    sys.sigma_max = sv.sigma_max;
    sys.sigma_min_positive = sv.sigma_min_positive;
    sys.kernel_dim = sv.kernel_dim;
    sys.mu_f = 2.0 * sv.sigma_min_positive * sv.sigma_min_positive;
    sys.l_f = 2.0 * sv.sigma_max * sv.sigma_max;
    return sys;
}

Vector kkt_residual(const KktSystem& sys, std::span<const double> z) {
    Vector w = matvec(sys.g, z);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += sys.e[k];
    return w;
}

double gap(const KktSystem& sys, std::span<const double> z) { return squared_norm(kkt_residual(sys, z)); }
double gap(const KktSystem& sys, const PrimalDual& z) { return gap(sys, z.stacked()); }

Vector gap_gradient(const KktSystem& sys, std::span<const double> z) {
    Vector grad = matvec_transposed(sys.g, kkt_residual(sys, z));
    for (double& v : grad) v *= 2.0;
    return grad;
}

Vector gap_gradient(const KktSystem& sys, const PrimalDual& z) { return gap_gradient(sys, z.stacked()); }

PlayerPartials gap_partials(const KktSystem& sys, const PrimalDual& z, std::size_t i) {
    if (i >= sys.players_count()) throw std::out_of_range("gap_partials: player index out of range");
    const Vector grad = gap_gradient(sys, z);
    PlayerPartials out;
    for (std::size_t c : sys.x_indices[i]) out.x.push_back(grad[c]);
    const std::size_t nx = sys.primal_dim();
    for (std::size_t k = sys.lambda_offsets[i]; k < sys.lambda_offsets[i + 1]; ++k) out.lambda.push_back(grad[nx + k]);
    return out;
}

double default_certification_tolerance(const KktSystem& sys) { return 1e-8 * (1.0 + squared_norm(sys.e)); }

GneCertificate certify_gne(const KktSystem& sys, const PrimalDual& z, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("certify_gne: tol must be positive");
    const Vector w = kkt_residual(sys, z.stacked());
    const std::size_t d = sys.action_dim;
    const std::size_t nx = sys.primal_dim();

    GneCertificate cert;
    cert.tolerance = tol;
    cert.gap = squared_norm(w);
    for (std::size_t i = 0; i < sys.players_count(); ++i) {
        cert.stationarity_norms.push_back(norm(std::span<const double>(w).subspan(i * d, d)));
        const std::size_t lo = sys.lambda_offsets[i];
        cert.residual_norms.push_back(norm(std::span<const double>(w).subspan(nx + lo, sys.lambda_offsets[i + 1] - lo)));
    }
    cert.accepted = cert.gap <= tol;
    return cert;
}

}  // namespace gne
