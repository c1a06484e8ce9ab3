#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gne/kkt.hpp"

namespace gne {

/// A solver produced a non-finite value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what), iteration_(iteration) {}
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

struct FoConfig {
    std::optional<double> step;  ///< defaults to 1/L_F; must satisfy 0 < step ≤ 1/L_F
    std::size_t max_iters = 2'000'000;
    double stop_gap = 1e-12;
};

struct FoRecord {
    std::size_t t = 0;
    double gap = 0.0;
    double grad_norm = 0.0;
};

struct FoResult {
    PrimalDual z;
    std::vector<FoRecord> trace;  ///< t = 0 … iterations
    std::size_t iterations = 0;
    double step = 0.0;
    bool converged = false;
};

/// Gradient descent z ← z − step·∇F(z) until F ≤ stop_gap or max_iters.
/// Under the PL inequality each step with step = 1/L_F contracts F by (1 − μ_F/L_F).
FoResult solve_first_order(const KktSystem& sys, PrimalDual z0, const FoConfig& cfg);

/// ⌈log(F_0/target) / log(1/(1 − μ_F/L_F))⌉, the PL iteration bound for step 1/L_F.
std::size_t pl_iteration_bound(const KktSystem& sys, double initial_gap, double target_gap);

}  // namespace gne
