#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gne/zero_order.hpp"

namespace gne {

/// Outcome of one seed of a multi-seed zero-order run.
struct SeedOutcome {
    std::uint64_t seed = 0;
    std::optional<ZoResult> result;
    std::string error;          ///< divergence message when result is empty
    std::size_t failed_at = 0;  ///< iteration of the divergence
};

/// Runs solve_zero_order once per seed (cfg.seed is replaced) on up to `threads`
/// workers. Each worker owns its solver; the output is ordered like `seeds`.
std::vector<SeedOutcome> run_zero_order_seeds(const QuadraticGame& game, const KktSystem& sys, const PrimalDual& z0,
                                              const ZoConfig& cfg, std::span<const std::uint64_t> seeds,
                                              std::size_t threads);

double median(std::vector<double> values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Per-t mean of F across the successful seeds (traces must share row times).
struct MeanGapCurve {
    std::vector<double> t;
    std::vector<double> mean_gap;
};
MeanGapCurve mean_gap_curve(const std::vector<SeedOutcome>& outcomes);

/// Slope of log(mean F) vs log t over rows with t in [t_lo, t_hi].
double mean_gap_slope(const MeanGapCurve& curve, double t_lo, double t_hi);

/// Median over seeds of x_dist at the trace row with time t (seeds lacking it are skipped).
std::optional<double> median_x_dist_at(const std::vector<SeedOutcome>& outcomes, std::size_t t);

}  // namespace gne
