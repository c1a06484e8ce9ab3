#include <gtest/gtest.h>

#include "gne/verification.hpp"
#include "support.hpp"

using namespace gne;
using gne::test::fixture;

TEST(FdGradientCheck, PassesOnEveryFixture) {
    RngStream rng(1);
    for (const char* name : gne::test::kAllFixtures) {
        const auto rep = fd_gradient_check(assemble(fixture(name)), 4, 1e-4, rng);
        EXPECT_TRUE(rep.pass()) << rep.to_text();
        EXPECT_EQ(rep.items.size(), 5u);
        for (const auto& it : rep.items) EXPECT_LT(it.observed, 1e-6) << name << " " << it.label;
    }
    EXPECT_THROW(fd_gradient_check(assemble(fixture("single_scalar")), 1, 0.0, rng), std::invalid_argument);
}

TEST(FdGradientCheck, ScalarGradientAtZero) {
    const auto sys = assemble(fixture("single_scalar"));
    const double h = 1e-4;
    const double fd = (gap(sys, Vector{h}) - gap(sys, Vector{-h})) / (2 * h);
    EXPECT_NEAR(fd, -8.0, 1e-9);
    EXPECT_DOUBLE_EQ(gap_gradient(sys, Vector{0.0})[0], -8.0);
}

TEST(SolutionOracle, PaperExample) {
    const auto sys = assemble(fixture("paper_example"));
    const auto o = solution_oracle(sys);
    EXPECT_TRUE(o.gne_exists);
    EXPECT_EQ(o.kernel_dim, 0u);
    EXPECT_LE(o.residual, 1e-10 * (1 + 2075));
    const Vector expected{1, 2, 3, 4};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(o.z_bar.x()[k], expected[k], 1e-12);
    for (double l : o.z_bar.lambda()) EXPECT_NEAR(l, 0.0, 1e-12);
    EXPECT_TRUE(certify_gne(sys, o.z_bar, default_certification_tolerance(sys)).accepted);
}

TEST(SolutionOracle, InfeasibleInstanceHasNoGne) {
    const auto o = solution_oracle(assemble(fixture("infeasible")));
    EXPECT_FALSE(o.gne_exists);
    EXPECT_NEAR(o.residual, 0.5, 1e-12);
    EXPECT_EQ(o.kernel_dim, 1u);
}

TEST(SolutionOracle, ScalarAndThreePlayer) {
    EXPECT_NEAR(solution_oracle(assemble(fixture("single_scalar"))).z_bar.x()[0], 1.0, 1e-15);

    const auto sys = assemble(fixture("three_player"));
    const auto o = solution_oracle(sys);
    const Vector expected{1, -1, 2, 0, -2, 1, 1, -1, 2};
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(o.z_bar.stacked()[k], expected[k], 1e-11);
}

TEST(SolutionOracle, CertifiedWheneverItReportsExistence) {
    for (const char* name : gne::test::kAllFixtures) {
        const auto sys = assemble(fixture(name));
        const auto o = solution_oracle(sys);
        if (o.gne_exists) EXPECT_TRUE(certify_gne(sys, o.z_bar, default_certification_tolerance(sys)).accepted) << name;
    }
}

TEST(EstimatorAudit, UnbiasedAtZeroAndAtTheSolution) {
    const auto game = fixture("paper_example");
    const auto sys = assemble(game);
    EstimatorAuditOptions opts;
    opts.rounds = 20000;
    const auto at_zero = estimator_audit(game, sys, PrimalDual(4, 3), opts);
    EXPECT_TRUE(at_zero.pass()) << at_zero.to_text();
    EXPECT_EQ(at_zero.items.size(), 7u);
    EXPECT_EQ(at_zero.items[0].expected, gap_gradient(sys, PrimalDual(4, 3))[0]);

    const auto at_solution = estimator_audit(game, sys, solution_oracle(sys).z_bar, opts);
    EXPECT_TRUE(at_solution.pass()) << at_solution.to_text();
    for (const auto& it : at_solution.items) EXPECT_NEAR(it.expected, 0.0, 1e-9);
}

TEST(EstimatorAudit, ReportsSecondMoments) {
    const auto game = fixture("three_player");
    const auto sys = assemble(game);
    EstimatorAuditOptions opts;
    opts.rounds = 10000;
    const auto rep = estimator_audit(game, sys, PrimalDual(6, 3), opts);
    // Two moments per player plus F(z).
    EXPECT_EQ(rep.metrics.size(), 7u);
    EXPECT_EQ(rep.metrics.back().first, "F(z)");
    EXPECT_EQ(rep.metrics.back().second, 405.0);
    opts.rounds = 1;
    EXPECT_THROW(estimator_audit(game, sys, PrimalDual(6, 3), opts), std::invalid_argument);
}

TEST(IdentityAudit, PassesOnDefaultGrid) {
    RngStream rng(5);
    const auto rep = identity_audit(default_identity_grid(), 100000, rng);
    EXPECT_TRUE(rep.pass()) << rep.to_text();
    EXPECT_EQ(default_identity_grid().size(), 1u + 2 + 3 + 2);
    EXPECT_THROW(identity_audit(default_identity_grid(), 99999, rng), std::invalid_argument);
}

TEST(CheckReport, AllowedFailuresAndJsonFields) {
    CheckReport rep;
    rep.name = "demo";
    rep.items = {{"a", 1, 1, 0.1, true}, {"b", 2, 1, 0.1, false}};
    EXPECT_FALSE(rep.pass());
    rep.allowed_failures = 1;
    EXPECT_TRUE(rep.pass());
    const auto j = rep.to_json();
    EXPECT_EQ(j["check"], "demo");
    EXPECT_EQ(j["failures"], 1);
    EXPECT_EQ(j["items"][1]["label"], "b");
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_NE(rep.to_text().find("demo: PASS"), std::string::npos);
}
