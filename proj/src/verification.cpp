#include "gne/verification.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "gne/zero_order.hpp"

namespace gne {

std::size_t CheckReport::failures() const noexcept {
    std::size_t f = 0;
    for (const auto& it : items) f += it.pass ? 0 : 1;
    return f;
}

std::string CheckReport::to_text() const {
    std::ostringstream os;
    os << std::setprecision(6);
    os << name << ": " << (pass() ? "PASS" : "FAIL") << " (" << items.size() - failures() << "/" << items.size()
       << " items within tolerance";
    if (allowed_failures > 0) os << ", " << allowed_failures << " violations allowed";
    os << ")\n";
    for (const auto& it : items)
        os << "  " << (it.pass ? "ok  " : "FAIL") << "  " << it.label << "  observed=" << it.observed
           << "  expected=" << it.expected << "  tol=" << it.tolerance << '\n';
    for (const auto& [key, value] : metrics) os << "  metric " << key << " = " << value << '\n';
    for (const auto& note : notes) os << "  note: " << note << '\n';
    return os.str();
}

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["check"] = name;
    j["pass"] = pass();
    j["failures"] = failures();
    j["allowed_failures"] = allowed_failures;
    j["items"] = nlohmann::json::array();
    for (const auto& it : items)
        j["items"].push_back({{"label", it.label},
                              {"observed", it.observed},
                              {"expected", it.expected},
                              {"tolerance", it.tolerance},
                              {"pass", it.pass}});
    j["metrics"] = nlohmann::json::object();
    for (const auto& [key, value] : metrics) j["metrics"][key] = value;
    j["notes"] = notes;
    return j;
}

CheckReport fd_gradient_check(const KktSystem& sys, std::size_t points, double h, RngStream& rng) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient_check: h must be positive");
    CheckReport rep;
    rep.name = "fd_gradient";
    const std::size_t dim = sys.g.cols();

    std::vector<Vector> zs;
    for (std::size_t p = 0; p < points; ++p) {
        Vector z = sample_std_normal(rng, dim);
        for (double& v : z) v *= 2.0;
        zs.push_back(std::move(z));
    }
    Vector minus_e = sys.e;
    for (double& v : minus_e) v = -v;
    zs.push_back(min_norm_least_squares(sys.g, minus_e));

    for (std::size_t p = 0; p < zs.size(); ++p) {
        Vector z = zs[p];
        const Vector grad = gap_gradient(sys, z);
        double worst = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double keep = z[k];
            z[k] = keep + h;
            const double fp = gap(sys, z);
            z[k] = keep - h;
            const double fm = gap(sys, z);
            z[k] = keep;
            worst = std::max(worst, std::abs((fp - fm) / (2.0 * h) - grad[k]));
        }
        const double tol = 1e-6 * std::max(1.0, norm(grad));
        const std::string label = p + 1 == zs.size() ? "least-squares minimizer" : "random z #" + std::to_string(p + 1);
        rep.items.push_back({label, worst, 0.0, tol, worst <= tol});
    }
    return rep;
}

namespace {

CheckReport estimator_pass(const QuadraticGame& game, const KktSystem& sys, const PrimalDual& z,
                           const EstimatorAuditOptions& opts, std::uint64_t seed) {
    const auto game_oracles = make_oracles(game);
    std::vector<const PlayerOracle*> oracles;
    for (const auto& o : game_oracles) oracles.push_back(&o);

    const std::size_t dim = z.size();
    const std::size_t n = sys.players_count();
    const std::size_t nx = sys.primal_dim();
    Vector mean(dim, 0.0), m2(dim, 0.0);
    Vector x_moment(n, 0.0), l_moment(n, 0.0);

    for (std::size_t r = 1; r <= opts.rounds; ++r) {
        const auto round =
            run_estimator_round(oracles, sys, z, draw_round_sample(sys, seed, r), opts.sigma, opts.delta);
        const double count = static_cast<double>(r);
        for (std::size_t k = 0; k < dim; ++k) {
            const double delta = round.zeta[k] - mean[k];
            mean[k] += delta / count;
            m2[k] += delta * (round.zeta[k] - mean[k]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            x_moment[i] += squared_norm(round.estimates[i].x);
            l_moment[i] += squared_norm(round.estimates[i].lambda);
        }
    }

    const Vector grad = gap_gradient(sys, z);
    const double rounds = static_cast<double>(opts.rounds);
    CheckReport rep;
    rep.name = "estimator";
    for (std::size_t k = 0; k < dim; ++k) {
        const double se = std::sqrt(m2[k] / (rounds - 1.0) / rounds);
        const std::string label = k < nx ? "zeta_x[" + std::to_string(k) + "]" : "zeta_lambda[" + std::to_string(k - nx) + "]";
        rep.items.push_back({label, mean[k], grad[k], opts.band * se, std::abs(mean[k] - grad[k]) <= opts.band * se});
    }
    rep.allowed_failures = dim / 100;
    for (std::size_t i = 0; i < n; ++i) {
        rep.metrics.emplace_back("E|zeta_x^" + std::to_string(i + 1) + "|^2", x_moment[i] / rounds);
        rep.metrics.emplace_back("E|zeta_lambda^" + std::to_string(i + 1) + "|^2", l_moment[i] / rounds);
    }
    rep.metrics.emplace_back("F(z)", gap(sys, z));
    return rep;
}

}  // namespace

CheckReport estimator_audit(const QuadraticGame& game, const KktSystem& sys, const PrimalDual& z,
                            const EstimatorAuditOptions& opts) {
    if (opts.rounds < 2) throw std::invalid_argument("estimator_audit: need at least 2 rounds");
    CheckReport rep = estimator_pass(game, sys, z, opts, opts.seed);
    for (std::size_t attempt = 1; attempt <= opts.retries && !rep.pass(); ++attempt) {
        const std::uint64_t fresh = derive_seed(opts.seed, {0xA0D17ULL, attempt});
        const std::size_t failed = rep.failures();
        rep = estimator_pass(game, sys, z, opts, fresh);
        rep.notes.push_back("retry " + std::to_string(attempt) + " with a fresh seed after " + std::to_string(failed) +
                            " band violations");
    }
    std::ostringstream os;
    os << "sigma=" << opts.sigma << " delta=" << opts.delta << " rounds=" << opts.rounds << " band=" << opts.band
       << " stderr";
    rep.notes.insert(rep.notes.begin(), os.str());
    return rep;
}

std::vector<IdentityCell> default_identity_grid() {
    std::vector<IdentityCell> grid;
    for (auto [n, d] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 2}, {3, 1}, {2, 3}})
        for (std::size_t j = 0; j < n; ++j) grid.push_back({n, d, j});
    return grid;
}

CheckReport identity_audit(const std::vector<IdentityCell>& grid, std::size_t samples, RngStream& rng) {
    if (samples < 100'000) throw std::invalid_argument("identity_audit: samples must be >= 1e5");
    constexpr double kBand = 5.0;
    CheckReport rep;
    rep.name = "gaussian_identities";
    for (const auto& cell : grid) {
        const Vector a = sample_std_normal(rng, cell.n * cell.d);
        const Vector b = sample_std_normal(rng, cell.n * cell.d);
        const auto res = gaussian_identity_check(a, b, cell.block, cell.d, cell.n, samples, rng);
        const std::string prefix = "n=" + std::to_string(cell.n) + " d=" + std::to_string(cell.d) +
                                   " j=" + std::to_string(cell.block + 1) + " ";
        for (const auto& id : res.identities)
            for (std::size_t k = 0; k < id.estimate.size(); ++k) {
                const double tol = kBand * id.std_error[k];
                const std::string label =
                    prefix + id.name + (id.estimate.size() > 1 ? "[" + std::to_string(k) + "]" : "");
                rep.items.push_back(
                    {label, id.estimate[k], id.closed_form[k], tol, std::abs(id.estimate[k] - id.closed_form[k]) <= tol});
            }
    }
    return rep;
}

SolutionOracleResult solution_oracle(const KktSystem& sys) {
    Vector minus_e = sys.e;
    for (double& v : minus_e) v = -v;
    const Vector z = min_norm_least_squares(sys.g, minus_e);
    SolutionOracleResult out;
    out.z_bar = PrimalDual(std::span<const double>(z).first(sys.primal_dim()),
                           std::span<const double>(z).subspan(sys.primal_dim()));
    out.residual = gap(sys, out.z_bar);
    out.threshold = 1e-10 * (1.0 + squared_norm(sys.e));
    out.kernel_dim = sys.kernel_dim;
    out.gne_exists = out.residual <= out.threshold;
    return out;
}

}  // namespace gne
