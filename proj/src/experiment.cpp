#include "gne/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace gne {

std::vector<SeedOutcome> run_zero_order_seeds(const QuadraticGame& game, const KktSystem& sys, const PrimalDual& z0,
                                              const ZoConfig& cfg, std::span<const std::uint64_t> seeds,
                                              std::size_t threads) {
    std::vector<SeedOutcome> out(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < seeds.size(); k = next++) {
            ZoConfig local = cfg;
            local.seed = seeds[k];
            out[k].seed = seeds[k];
            try {
                out[k].result = solve_zero_order(game, sys, z0, local);
            } catch (const DivergenceError& e) {
                out[k].error = e.what();
                out[k].failed_at = e.iteration();
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, seeds.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeanGapCurve mean_gap_curve(const std::vector<SeedOutcome>& outcomes) {
    MeanGapCurve curve;
    std::size_t count = 0;
    for (const auto& o : outcomes) {
        if (!o.result) continue;
        const auto& tr = o.result->trace;
        if (count == 0) {
            for (const auto& r : tr) curve.t.push_back(static_cast<double>(r.t));
            curve.mean_gap.assign(tr.size(), 0.0);
        } else if (tr.size() != curve.t.size()) {
            throw std::invalid_argument("mean_gap_curve: traces have different rows");
        }
        for (std::size_t k = 0; k < tr.size(); ++k) curve.mean_gap[k] += tr[k].gap;
        ++count;
    }
    for (double& v : curve.mean_gap) v /= static_cast<double>(std::max<std::size_t>(count, 1));
    return curve;
}

double mean_gap_slope(const MeanGapCurve& curve, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < curve.t.size(); ++k)
        if (curve.t[k] >= t_lo && curve.t[k] <= t_hi) {
            xs.push_back(curve.t[k]);
            ys.push_back(curve.mean_gap[k]);
        }
    return loglog_slope(xs, ys);
}

std::optional<double> median_x_dist_at(const std::vector<SeedOutcome>& outcomes, std::size_t t) {
    std::vector<double> vals;
    for (const auto& o : outcomes) {
        if (!o.result) continue;
        for (const auto& r : o.result->trace)
            if (r.t == t && r.x_dist) vals.push_back(*r.x_dist);
    }
    if (vals.empty()) return std::nullopt;
    return median(std::move(vals));
}

}  // namespace gne
