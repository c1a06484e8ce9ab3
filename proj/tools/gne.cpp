// gne: validate quadratic games, inspect the KKT reformulation, run the solvers and audits.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gne/experiment.hpp"
#include "gne/first_order.hpp"
#include "gne/game.hpp"
#include "gne/game_io.hpp"
#include "gne/kkt.hpp"
#include "gne/run_config.hpp"
#include "gne/trace_io.hpp"
#include "gne/verification.hpp"
#include "gne/zero_order.hpp"

#ifndef GNE_FIXTURE_DIR
#define GNE_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kFailed = 1, kInputError = 2, kDiverged = 3 };

fs::path fixture_dir() {
    if (const char* env = std::getenv("GNE_FIXTURE_DIR")) return env;
    return GNE_FIXTURE_DIR;
}

/// A readable path is used as-is; otherwise "paper" and bare names resolve in the fixture directory.
fs::path resolve_game(const std::string& name) {
    if (fs::exists(name)) return name;
    const std::string stem = name == "paper" ? "paper_example" : name;
    for (const auto& candidate : {fixture_dir() / stem, fixture_dir() / (stem + ".json")})
        if (fs::exists(candidate)) return candidate;
    return name;
}

std::string vec_text(std::span<const double> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << gne::format_real(v[k]);
    os << ')';
    return os.str();
}

std::string short_real(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

int cmd_validate(const std::string& game_name) {
    const auto game = gne::load_game(resolve_game(game_name));
    const auto report = gne::validate(game);
    std::cout << report.to_text();
    return report.ok() ? kOk : kFailed;
}

json matrix_json(const gne::Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

int cmd_reformulate(const std::string& game_name, bool as_json) {
    const auto game = gne::load_game(resolve_game(game_name));
    const auto report = gne::validate(game);
    if (!report.ok()) {
        std::cerr << report.to_text();
        return kFailed;
    }
    const auto sys = gne::assemble(game);
    const auto mono = gne::pseudo_gradient_monotonicity(game);
    const auto oracle = gne::solution_oracle(sys);
    const std::string existence =
        oracle.gne_exists ? "GNE exists" : "no GNE (KKT system G z = -e is inconsistent)";

    if (as_json) {
        json j;
        j["players"] = game.players_count();
        j["action_dim"] = game.action_dim();
        j["layout"] = gne::to_string(game.layout());
        j["primal_dim"] = sys.primal_dim();
        j["dual_dim"] = sys.dual_dim();
        j["G"] = matrix_json(sys.g);
        j["e"] = sys.e;
        j["sigma_max"] = sys.sigma_max;
        j["sigma_min_positive"] = sys.sigma_min_positive;
        j["mu_F"] = sys.mu_f;
        j["L_F"] = sys.l_f;
        j["condition_ratio"] = sys.l_f / sys.mu_f;
        j["pseudo_gradient_min_eigenvalue"] = mono.mu;
        j["monotone"] = mono.is_monotone;
        j["oracle_residual"] = oracle.residual;
        j["oracle_threshold"] = oracle.threshold;
        j["kernel_dim"] = oracle.kernel_dim;
        j["gne_exists"] = oracle.gne_exists;
        j["z_bar"] = std::vector<double>(oracle.z_bar.stacked().begin(), oracle.z_bar.stacked().end());
        std::cout << j.dump(2) << '\n';
        return kOk;
    }

    std::cout << "players          " << game.players_count() << "\n"
              << "action dim       " << game.action_dim() << " (" << gne::to_string(game.layout()) << ")\n"
              << "z = [x, lambda]  " << sys.primal_dim() << " + " << sys.dual_dim() << "\n"
              << "G (" << sys.g.rows() << " x " << sys.g.cols() << ")\n";
    for (std::size_t r = 0; r < sys.g.rows(); ++r) {
        std::cout << "  ";
        for (double v : sys.g.row(r)) std::cout << std::setw(10) << short_real(v) << ' ';
        std::cout << '\n';
    }
    std::cout << "e                " << vec_text(sys.e) << "\n"
              << "sigma_max(G)     " << gne::format_real(sys.sigma_max) << "\n"
              << "sigma_min+(G)    " << gne::format_real(sys.sigma_min_positive) << "\n"
              << "mu_F             " << gne::format_real(sys.mu_f) << "\n"
              << "L_F              " << gne::format_real(sys.l_f) << "\n"
              << "L_F / mu_F       " << gne::format_real(sys.l_f / sys.mu_f) << "\n"
              << "pseudo-gradient  " << (mono.is_monotone ? "monotone" : "non-monotone")
              << " (min eigenvalue of symmetric Jacobian " << gne::format_real(mono.mu) << ")\n"
              << "kernel dim       " << oracle.kernel_dim << "\n"
              << "oracle residual  " << gne::format_real(oracle.residual) << " (threshold "
              << gne::format_real(oracle.threshold) << ")\n"
              << existence << "\n";
    return kOk;
}

struct SolveFlags {
    std::string config;
    std::string game;
    std::string method;
    std::optional<std::size_t> iterations;
    std::optional<double> sigma, delta, step, stop_gap;
    std::optional<std::size_t> max_iters;
    std::string schedule;
    std::optional<std::size_t> seed_count;
    std::optional<std::uint64_t> seed;
    std::string trace_dir;
    std::optional<std::size_t> trace_every;
    std::vector<std::string> reference;
    std::optional<std::size_t> threads;
};

gne::RunConfig merge(const SolveFlags& f) {
    gne::RunConfig cfg;
    if (!f.config.empty()) cfg = gne::parse_run_config(gne::read_text_file(f.config));
    if (!f.game.empty()) cfg.game = f.game;
    if (!f.method.empty()) cfg.method = f.method == "first-order" ? gne::Method::first_order : gne::Method::zero_order;
    if (f.iterations) cfg.iterations = *f.iterations;
    if (f.sigma) cfg.sigma = *f.sigma;
    if (f.delta) cfg.delta = *f.delta;
    if (f.step) cfg.first_order.step = *f.step;
    if (f.stop_gap) cfg.first_order.stop_gap = *f.stop_gap;
    if (f.max_iters) cfg.first_order.max_iters = *f.max_iters;
    if (!f.schedule.empty()) {
        try {
            cfg.schedule = gne::parse_schedule_spec(f.schedule);
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("--schedule", e.what());
        }
    }
    const std::uint64_t base = f.seed.value_or(gne::default_base_seed());
    if (f.seed_count) cfg.seeds = gne::seed_range(base, *f.seed_count);
    else if (f.seed) cfg.seeds = {*f.seed};
    if (cfg.seeds.empty()) cfg.seeds = {base};
    if (!f.trace_dir.empty()) cfg.trace_dir = f.trace_dir;
    if (f.trace_every) cfg.trace_every = *f.trace_every;
    if (f.threads) cfg.threads = *f.threads;
    if (f.reference.size() == 1 && f.reference.front() == "oracle") {
        cfg.reference_from_oracle = true;
        cfg.reference.reset();
    } else if (!f.reference.empty()) {
        gne::Vector ref;
        for (const auto& s : f.reference) {
            try {
                ref.push_back(std::stod(s));
            } catch (const std::logic_error&) {
                throw CLI::ValidationError("--reference", "not a number: " + s);
            }
        }
        cfg.reference = ref;
        cfg.reference_from_oracle = false;
    }
    if (cfg.game.empty()) throw CLI::RequiredError("--game (or \"game\" in --config)");
    return cfg;
}

void open_trace(std::ofstream& out, const fs::path& path) {
    out.open(path, std::ios::binary);
    if (!out) throw gne::IoError("cannot write " + path.string());
}

struct Stats {
    double median, min, max;
};

Stats stats(const std::vector<double>& v) {
    return {gne::median(v), *std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end())};
}

int solve_first_order(const gne::RunConfig& cfg, const gne::KktSystem& sys) {
    gne::FoResult res;
    try {
        res = gne::solve_first_order(sys, gne::PrimalDual(sys.primal_dim(), sys.dual_dim()), cfg.first_order);
    } catch (const gne::DivergenceError& e) {
        std::cerr << "diverged at t = " << e.iteration() << ": " << e.what() << '\n';
        return kDiverged;
    }
    if (cfg.trace_dir) {
        fs::create_directories(*cfg.trace_dir);
        std::ofstream out;
        open_trace(out, fs::path(*cfg.trace_dir) / "trace_first_order.csv");
        gne::write_first_order_trace(out, res.trace, cfg.trace_every);
    }
    const auto cert = gne::certify_gne(sys, res.z, std::max(10.0 * cfg.first_order.stop_gap, 1e-300));
    std::cout << "method           first-order\n"
              << "step             " << gne::format_real(res.step) << "\n"
              << "iterations       " << res.iterations << (res.converged ? "" : " (max_iters reached)") << "\n"
              << "PL bound         "
              << gne::pl_iteration_bound(sys, res.trace.front().gap, cfg.first_order.stop_gap) << "\n"
              << "final F          " << gne::format_real(res.trace.back().gap) << "\n"
              << "x                " << vec_text(res.z.x()) << "\n"
              << "lambda           " << vec_text(res.z.lambda()) << "\n"
              << "certificate      " << (cert.accepted ? "accepted" : "rejected") << "\n";
    return kOk;
}

int solve_zero_order(const gne::RunConfig& cfg, const gne::QuadraticGame& game, const gne::KktSystem& sys) {
    gne::ZoConfig zc;
    zc.sigma = cfg.sigma;
    zc.delta = cfg.delta;
    zc.iterations = cfg.iterations;
    zc.trace_every = cfg.trace_every;
    zc.schedule = cfg.schedule.resolve(sys);
    if (cfg.reference_from_oracle) {
        const auto oracle = gne::solution_oracle(sys);
        if (!oracle.gne_exists) {
            std::cerr << "error: --reference oracle: the game has no GNE\n";
            return kFailed;
        }
        zc.reference_x = gne::Vector(oracle.z_bar.x().begin(), oracle.z_bar.x().end());
    } else if (cfg.reference) {
        zc.reference_x = cfg.reference;
    }
    zc.schedule.check(sys.g.cols());
    if (zc.reference_x && zc.reference_x->size() != sys.primal_dim())
        throw std::invalid_argument("reference has " + std::to_string(zc.reference_x->size()) +
                                    " entries, x has " + std::to_string(sys.primal_dim()));

    const std::size_t threads =
        cfg.threads ? cfg.threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const auto outcomes = gne::run_zero_order_seeds(game, sys, gne::PrimalDual(sys.primal_dim(), sys.dual_dim()), zc,
                                                    cfg.seeds, threads);

    if (cfg.trace_dir) fs::create_directories(*cfg.trace_dir);
    std::vector<double> finals, dists;
    std::size_t diverged = 0;
    std::cout << "method           zero-order\n"
              << "iterations       " << cfg.iterations << "\n"
              << "sigma, delta     " << cfg.sigma << ", " << cfg.delta << "\n";
    for (const auto& o : outcomes) {
        if (!o.result) {
            ++diverged;
            std::cout << "seed " << o.seed << "  diverged at t = " << o.failed_at << ": " << o.error << '\n';
            continue;
        }
        const auto& last = o.result->trace.back();
        finals.push_back(last.gap);
        if (last.x_dist) dists.push_back(*last.x_dist);
        std::cout << "seed " << o.seed << "  F = " << gne::format_real(last.gap);
        if (last.x_dist) std::cout << "  x_dist = " << gne::format_real(*last.x_dist);
        std::cout << '\n';
        if (cfg.trace_dir) {
            std::ofstream out;
            open_trace(out, fs::path(*cfg.trace_dir) / ("trace_seed" + std::to_string(o.seed) + ".csv"));
            gne::write_zero_order_trace(out, o.result->trace);
        }
    }
    if (!finals.empty()) {
        const auto f = stats(finals);
        std::cout << "final F          median " << gne::format_real(f.median) << "  min " << gne::format_real(f.min)
                  << "  max " << gne::format_real(f.max) << "\n";
        if (!dists.empty()) {
            const auto dd = stats(dists);
            std::cout << "final x_dist     median " << gne::format_real(dd.median) << "  min "
                      << gne::format_real(dd.min) << "  max " << gne::format_real(dd.max) << "\n";
            if (cfg.iterations >= 1000)
                if (auto at = gne::median_x_dist_at(outcomes, 1000))
                    std::cout << "x_dist at t=1000 median " << gne::format_real(*at) << "\n";
        }
        const double lo = static_cast<double>(cfg.iterations) / 10.0;
        const auto curve = gne::mean_gap_curve(outcomes);
        const auto rows = std::count_if(curve.t.begin(), curve.t.end(), [&](double t) { return t >= lo; });
        if (lo >= 1.0 && rows >= 2)
            std::cout << "log-log slope of mean F on [" << lo << ", " << cfg.iterations
                      << "]  " << gne::format_real(gne::mean_gap_slope(curve, lo, static_cast<double>(cfg.iterations)))
                      << "\n";
    }
    if (diverged) std::cout << diverged << " of " << outcomes.size() << " seeds diverged\n";
    return diverged ? kDiverged : kOk;
}

int cmd_solve(const SolveFlags& flags) {
    const auto cfg = merge(flags);
    const auto game = gne::load_game(resolve_game(cfg.game));
    const auto report = gne::validate(game);
    if (!report.ok()) {
        std::cerr << report.to_text();
        return kFailed;
    }
    const auto sys = gne::assemble(game);
    return cfg.method == gne::Method::first_order ? solve_first_order(cfg, sys) : solve_zero_order(cfg, game, sys);
}

struct AuditFlags {
    std::string kind;
    std::string game = "paper";
    std::string point = "zero";
    std::size_t rounds = 200'000;
    std::size_t samples = 1'000'000;
    std::size_t points = 4;
    double sigma = 0.05;
    double delta = 0.05;
    std::optional<std::uint64_t> seed;
    bool json = false;
};

int print_report(const gne::CheckReport& rep, bool as_json) {
    if (as_json) std::cout << rep.to_json().dump(2) << '\n';
    else std::cout << rep.to_text();
    return rep.pass() ? kOk : kFailed;
}

int cmd_audit(const AuditFlags& f) {
    const std::uint64_t seed = f.seed.value_or(gne::default_base_seed());
    if (f.kind == "identities") {
        gne::RngStream rng(seed);
        return print_report(gne::identity_audit(gne::default_identity_grid(), f.samples, rng), f.json);
    }

    const auto game = gne::load_game(resolve_game(f.game));
    const auto report = gne::validate(game);
    if (!report.ok()) {
        std::cerr << report.to_text();
        return kFailed;
    }
    const auto sys = gne::assemble(game);

    if (f.kind == "fd") {
        gne::RngStream rng(seed);
        return print_report(gne::fd_gradient_check(sys, f.points, 1e-4, rng), f.json);
    }
    if (f.kind == "oracle") {
        const auto o = gne::solution_oracle(sys);
        if (f.json) {
            json j;
            j["x"] = std::vector<double>(o.z_bar.x().begin(), o.z_bar.x().end());
            j["lambda"] = std::vector<double>(o.z_bar.lambda().begin(), o.z_bar.lambda().end());
            j["residual"] = o.residual;
            j["threshold"] = o.threshold;
            j["kernel_dim"] = o.kernel_dim;
            j["gne_exists"] = o.gne_exists;
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "x        " << vec_text(o.z_bar.x()) << "\n"
                      << "lambda   " << vec_text(o.z_bar.lambda()) << "\n"
                      << "F(z)     " << gne::format_real(o.residual) << " (threshold " << gne::format_real(o.threshold)
                      << ")\n"
                      << "kernel   " << o.kernel_dim << "\n"
                      << (o.gne_exists ? "GNE exists" : "no GNE (KKT system G z = -e is inconsistent)") << "\n";
        }
        return o.gne_exists ? kOk : kFailed;
    }

    // estimator
    gne::PrimalDual z(sys.primal_dim(), sys.dual_dim());
    if (f.point == "solution") {
        z = gne::solution_oracle(sys).z_bar;
    } else if (f.point == "random") {
        gne::RngStream rng(gne::derive_seed(seed, {0x9017ULL}));
        const auto v = gne::sample_std_normal(rng, z.size());
        std::copy(v.begin(), v.end(), z.stacked().begin());
    }
    gne::EstimatorAuditOptions opts;
    opts.sigma = f.sigma;
    opts.delta = f.delta;
    opts.rounds = f.rounds;
    opts.seed = seed;
    return print_report(gne::estimator_audit(game, sys, z, opts), f.json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Nash equilibria of quadratic games with linear coupling constraints"};
    app.require_subcommand(1);

    std::string game_name;
    auto* validate = app.add_subcommand("validate", "Check a game document for dimension, symmetry and convexity errors");
    validate->add_option("game", game_name, "Game file or bundled fixture name")->required();

    bool reform_json = false;
    auto* reformulate = app.add_subcommand("reformulate", "Print the KKT system, mu_F, L_F and existence diagnostics");
    reformulate->add_option("game", game_name, "Game file or bundled fixture name")->required();
    reformulate->add_flag("--json", reform_json, "Structured output");

    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "Run the first-order or zero-order solver");
    solve->add_option("--config", sf.config, "Run configuration (JSON)");
    solve->add_option("--game", sf.game, "Game file or bundled fixture name");
    solve->add_option("--method", sf.method, "first-order | zero-order")
        ->check(CLI::IsMember({"first-order", "zero-order"}));
    solve->add_option("--T", sf.iterations, "Zero-order iterations");
    solve->add_option("--sigma", sf.sigma, "Query radius")->check(CLI::PositiveNumber);
    solve->add_option("--delta", sf.delta, "Direction offset")->check(CLI::PositiveNumber);
    solve->add_option("--schedule", sf.schedule, "paper-example | global:G,T0 | global-auto:FACTOR,T0");
    solve->add_option("--seeds", sf.seed_count, "Number of consecutive seeds");
    solve->add_option("--seed", sf.seed, "First seed (default $GNE_SEED or 1)");
    solve->add_option("--trace-dir", sf.trace_dir, "Directory for CSV traces");
    solve->add_option("--trace-every", sf.trace_every, "Trace stride")->check(CLI::PositiveNumber);
    solve->add_option("--reference", sf.reference, "Reference x, or 'oracle'")->delimiter(',');
    solve->add_option("--step", sf.step, "First-order step (default 1/L_F)");
    solve->add_option("--max-iters", sf.max_iters, "First-order iteration cap");
    solve->add_option("--stop-gap", sf.stop_gap, "First-order stopping gap");
    solve->add_option("--threads", sf.threads, "Worker threads for seeds");

    AuditFlags af;
    auto* audit = app.add_subcommand("audit", "Run an independent check");
    audit->add_option("kind", af.kind, "fd | estimator | identities | oracle")
        ->required()
        ->check(CLI::IsMember({"fd", "estimator", "identities", "oracle"}));
    audit->add_option("--game", af.game, "Game file or bundled fixture name");
    audit->add_option("--point", af.point, "Estimator audit point")->check(CLI::IsMember({"zero", "solution", "random"}));
    audit->add_option("--rounds", af.rounds, "Estimator rounds");
    audit->add_option("--samples", af.samples, "Identity samples");
    audit->add_option("--points", af.points, "Random points for the gradient check");
    audit->add_option("--sigma", af.sigma, "Query radius")->check(CLI::PositiveNumber);
    audit->add_option("--delta", af.delta, "Direction offset")->check(CLI::PositiveNumber);
    audit->add_option("--seed", af.seed, "Seed (default $GNE_SEED or 1)");
    audit->add_flag("--json", af.json, "Structured output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*validate) return cmd_validate(game_name);
        if (*reformulate) return cmd_reformulate(game_name, reform_json);
        if (*solve) return cmd_solve(sf);
        if (*audit) return cmd_audit(af);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const gne::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInputError;
    } catch (const gne::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const gne::DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << '\n';
        return kDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}
