#include <gtest/gtest.h>

#include <cmath>

#include "gne/game.hpp"
#include "gne/game_io.hpp"
#include "support.hpp"

using namespace gne;
using gne::test::fixture;

namespace {

QuadraticGame paper() { return fixture("paper_example"); }

QuadraticGame mutate(const QuadraticGame& g, std::size_t i, void (*edit)(PlayerData&)) {
    auto players = g.players();
    edit(players[i]);
    return QuadraticGame(g.players_count(), g.action_dim(), players, g.layout());
}

bool has_issue(const ValidationReport& rep, ValidationIssue::Kind kind, std::size_t player) {
    for (const auto& issue : rep.issues)
        if (issue.kind == kind && issue.player == player) return true;
    return false;
}

const Vector kPaperSolution{1, 2, 3, 4};

}  // namespace

TEST(Layout, OwnershipOfCoordinates) {
    const auto g = paper();
    EXPECT_EQ(g.layout(), ActionLayout::interleaved);
    EXPECT_EQ(g.own_indices(0), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(g.own_indices(1), (std::vector<std::size_t>{1, 3}));
    const auto b = g.with_layout(ActionLayout::blocked);
    EXPECT_EQ(b.own_indices(0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(b.own_indices(1), (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(parse_layout("blocked"), ActionLayout::blocked);
    EXPECT_FALSE(parse_layout("striped"));
}

TEST(Validate, AcceptsEveryBundledFixture) {
    for (const char* name : gne::test::kAllFixtures) {
        const auto rep = validate(fixture(name));
        EXPECT_TRUE(rep.ok()) << name << ": " << rep.to_text();
    }
}

TEST(Validate, AsymmetricQNamesThePlayer) {
    const auto bad = mutate(paper(), 1, [](PlayerData& p) { p.q(0, 1) += 0.5; });
    const auto rep = validate(bad);
    EXPECT_FALSE(rep.ok());
    EXPECT_TRUE(has_issue(rep, ValidationIssue::Kind::symmetry, 1));
    EXPECT_NE(rep.to_text().find("[player 2]"), std::string::npos);
}

TEST(Validate, NegativeOwnBlockIsAConvexityViolation) {
    // Player 1 owns coordinates 0 and 2: set that block to -I.
    const auto bad = mutate(paper(), 0, [](PlayerData& p) {
        p.q(0, 0) = -1;
        p.q(2, 2) = -1;
        p.q(0, 2) = p.q(2, 0) = 0;
    });
    const auto rep = validate(bad);
    EXPECT_TRUE(has_issue(rep, ValidationIssue::Kind::convexity, 0));
}

TEST(Validate, DimensionBreak) {
    const auto bad = mutate(paper(), 0, [](PlayerData& p) { p.r.pop_back(); });
    EXPECT_TRUE(has_issue(validate(bad), ValidationIssue::Kind::dimension, 0));

    const auto short_b = mutate(paper(), 1, [](PlayerData& p) { p.b.push_back(1.0); });
    EXPECT_TRUE(has_issue(validate(short_b), ValidationIssue::Kind::dimension, 1));
}

TEST(Validate, NonFiniteEntry) {
    const auto bad = mutate(paper(), 1, [](PlayerData& p) { p.r[2] = NAN; });
    EXPECT_TRUE(has_issue(validate(bad), ValidationIssue::Kind::non_finite, 1));
}

TEST(ParseGame, MalformedDocumentReportsPosition) {
    try {
        parse_game("{\n  \"n\": 2,\n  \"d\": \n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_GT(e.column(), 0u);
    }
}

TEST(ParseGame, MissingFieldsAndBadLayout) {
    EXPECT_THROW(parse_game(R"({"n": 1, "players": []})"), ParseError);
    EXPECT_THROW(parse_game(R"({"n": 1, "d": 1, "layout": "diagonal", "players": []})"), ParseError);
    EXPECT_THROW(parse_game(R"([1, 2])"), ParseError);
    EXPECT_THROW(load_game("/nonexistent/game.json"), IoError);
}

TEST(ParseGame, TinyAsymmetryIsSymmetrized) {
    const auto g = parse_game(R"({"n":1,"d":2,"players":[{"Q":[[2,1],[1.0000000000000002,2]],"r":[0,0]}]})");
    EXPECT_EQ(g.player(0).q(0, 1), g.player(0).q(1, 0));
    EXPECT_TRUE(validate(g).ok());
}

TEST(ParseGame, PaperFixtureCarriesTheExampleData) {
    const auto g = paper();
    EXPECT_EQ(g.player(0).q, Matrix::from_rows({{7, 1, 1, 0}, {1, 7, 0, 1}, {1, 0, 7, 1}, {0, 1, 1, 7}}));
    EXPECT_EQ(g.player(1).q, Matrix::from_rows({{7, 0, -3.5, 1}, {0, 7, 1, 0}, {-3.5, 1, 7, 0}, {1, 0, 0, 7}}));
    EXPECT_EQ(g.player(0).r, (Vector{-12, -19, -26, -33}));
    EXPECT_EQ(g.player(1).r, (Vector{-8, -17, -17, -29}));
    EXPECT_EQ(g.player(0).a, Matrix::from_rows({{1, 0, 1, 0}, {1, 1, 0, 0}}));
    EXPECT_EQ(g.player(0).b, (Vector{4, 3}));
    EXPECT_EQ(g.player(1).a, Matrix::from_rows({{1, 1, 1, 1}}));
    EXPECT_EQ(g.player(1).b, (Vector{10}));
}

TEST(Evaluate, CostsAndResidualsAtTheSolution) {
    const auto g = paper();
    EXPECT_DOUBLE_EQ(eval_cost(g, 0, kPaperSolution), -130.0);
    EXPECT_DOUBLE_EQ(eval_cost(g, 1, kPaperSolution), -104.5);
    EXPECT_EQ(eval_residual(g, 0, kPaperSolution), (Vector{0, 0}));
    EXPECT_EQ(eval_residual(g, 1, kPaperSolution), (Vector{0}));
    EXPECT_THROW(eval_cost(g, 0, Vector{1, 2}), DimensionError);
    EXPECT_THROW(eval_cost(g, 2, kPaperSolution), std::out_of_range);
    EXPECT_TRUE(eval_residual(fixture("three_player"), 1, Vector(6, 0.0)).empty());
}

TEST(Evaluate, OracleMatchesDirectEvaluation) {
    const auto g = fixture("three_player");
    const auto oracles = make_oracles(g);
    RngStream rng(3);
    const auto x = sample_std_normal(rng, g.joint_dim());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(oracles[i].cost(x), eval_cost(g, i, x));
        EXPECT_EQ(oracles[i].residual(x), eval_residual(g, i, x));
    }
}

TEST(Evaluate, CostIsConvexAlongOwnBlockMidpoints) {
    RngStream rng(17);
    for (const char* name : gne::test::kAllFixtures) {
        const auto g = fixture(name);
        for (std::size_t i = 0; i < g.players_count(); ++i)
            for (int trial = 0; trial < 200; ++trial) {
                const auto x = sample_std_normal(rng, g.joint_dim());
                auto xp = x;
                for (std::size_t c : g.own_indices(i)) xp[c] += 3.0 * rng.standard_normal();
                Vector mid(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) mid[k] = 0.5 * (x[k] + xp[k]);
                const double lhs = eval_cost(g, i, mid);
                const double rhs = 0.5 * eval_cost(g, i, x) + 0.5 * eval_cost(g, i, xp);
                const double scale = 1.0 + std::abs(rhs);
                ASSERT_LE(lhs, rhs + 1e-9 * scale) << name << " player " << i;
            }
    }
}

TEST(Monotonicity, FrozenMinimumEigenvalues) {
    const auto p = pseudo_gradient_monotonicity(paper());
    EXPECT_NEAR(p.mu, 6.0, 1e-12);
    EXPECT_TRUE(p.is_monotone);

    const auto blocked = pseudo_gradient_monotonicity(paper().with_layout(ActionLayout::blocked));
    EXPECT_NEAR(blocked.mu, 5.1306114553992696854, 1e-12);

    const auto three = pseudo_gradient_monotonicity(fixture("three_player"));
    EXPECT_NEAR(three.mu, -4.1939738099960579031, 1e-12);
    EXPECT_FALSE(three.is_monotone);
}

TEST(Monotonicity, SinglePlayerConvexIsMonotone) {
    EXPECT_TRUE(pseudo_gradient_monotonicity(fixture("single_scalar")).is_monotone);
    EXPECT_TRUE(pseudo_gradient_monotonicity(fixture("infeasible")).is_monotone);
}

TEST(Monotonicity, JacobianRowsBelongToTheOwner) {
    const auto g = paper();
    const auto jac = pseudo_gradient_jacobian(g);
    // Row 1 is owned by player 2 under the interleaved layout.
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(jac(1, c), g.player(1).q(1, c));
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(jac(2, c), g.player(0).q(2, c));
}
