#include "gne/first_order.hpp"

#include <cmath>

namespace gne {

FoResult solve_first_order(const KktSystem& sys, PrimalDual z0, const FoConfig& cfg) {
    if (z0.size() != sys.g.cols()) throw DimensionError("solve_first_order: z0 has the wrong length");
    if (!(cfg.stop_gap > 0.0)) throw std::invalid_argument("solve_first_order: stop_gap must be positive");
    const double max_step = 1.0 / sys.l_f;
    const double step = cfg.step.value_or(max_step);
    if (!(step > 0.0) || step > max_step * (1.0 + 1e-12))
        throw std::invalid_argument("solve_first_order: step must lie in (0, 1/L_F]");

    FoResult res{std::move(z0), {}, 0, step, false};
    auto z = res.z.stacked();
    for (std::size_t t = 0;; ++t) {
        const Vector w = kkt_residual(sys, z);
        const double f = squared_norm(w);
        Vector grad = matvec_transposed(sys.g, w);
        for (double& v : grad) v *= 2.0;
        if (!std::isfinite(f)) throw DivergenceError("first-order iterate diverged", t);
        res.trace.push_back({t, f, norm(grad)});
        res.iterations = t;
        if (f <= cfg.stop_gap) {
            res.converged = true;
            break;
        }
        if (t == cfg.max_iters) break;
        for (std::size_t k = 0; k < z.size(); ++k) z[k] -= step * grad[k];
    }
    return res;
}

std::size_t pl_iteration_bound(const KktSystem& sys, double initial_gap, double target_gap) {
    if (initial_gap <= target_gap) return 0;
    return static_cast<std::size_t>(
        std::ceil(std::log(initial_gap / target_gap) / -std::log1p(-sys.mu_f / sys.l_f)));
}

}  // namespace gne
