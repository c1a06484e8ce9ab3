#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gne/kkt.hpp"
#include "gne/verification.hpp"
#include "support.hpp"

using namespace gne;
using gne::test::fixture;

namespace {

struct Frozen {
    const char* name;
    double sigma_max;
    double sigma_min_positive;
    double mu_f;
    double l_f;
    std::size_t kernel_dim;
    double e_squared;
};

// 50-digit reference values from an independent high-precision SVD.
const Frozen kFrozen[] = {
    {"paper_example", 9.0927236159664005585, 0.071920274613240056977, 0.010345051800887724454,
     165.35524551270618917, 0, 2075},
    {"three_player", 10.597535635165499647, 0.036977807998125695626, 0.0027347165686924973309,
     224.61552307720526009, 0, 405},
    {"single_scalar", 2, 2, 8, 8, 0, 4},
    {"infeasible", 2.7320508075688772935, 0.73205080756887729353, 2 * 0.73205080756887729353 * 0.73205080756887729353,
     2 * 2.7320508075688772935 * 2.7320508075688772935, 1, 5},
    {"well_conditioned", 2.6133167946234369638, 0.4526952970891407229, 0.40986606401325076212,
     13.658849338121830022, 0, 33.5},
};

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

/// F minus its infimum; the infimum is positive only when G·z = −e is inconsistent.
double excess_gap(const KktSystem& sys, std::span<const double> z, double f_min) { return gap(sys, z) - f_min; }

}  // namespace

TEST(Assemble, HBlocksUnderBlockedLayout) {
    const auto g = fixture("paper_example").with_layout(ActionLayout::blocked);
    const auto h = build_h_blocks(g);
    EXPECT_EQ(h[0], Matrix::from_rows({{7, 1, 1, 0}, {1, 7, 0, 1}}));
    EXPECT_EQ(h[1], Matrix::from_rows({{-3.5, 1, 7, 0}, {1, 0, 0, 7}}));

    // A_{i(i,:)}ᵀ sits in the top-right block: player 1 columns 0,1 and player 2 columns 2,3.
    const auto sys = assemble(g);
    const Matrix a1 = Matrix::from_rows({{1, 0}, {1, 1}});
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(sys.g(r, 4 + k), a1(k, r));
    EXPECT_EQ(sys.g(2, 6), 1.0);
    EXPECT_EQ(sys.g(3, 6), 1.0);
    EXPECT_EQ(sys.g(0, 6), 0.0);
}

TEST(Assemble, HBlocksUnderInterleavedLayout) {
    const auto h = build_h_blocks(fixture("paper_example"));
    EXPECT_EQ(h[0], Matrix::from_rows({{7, 1, 1, 0}, {1, 0, 7, 1}}));
    EXPECT_EQ(h[1], Matrix::from_rows({{0, 7, 1, 0}, {1, 0, 0, 7}}));
}

TEST(Assemble, PaperSystem) {
    const auto sys = assemble(fixture("paper_example"));
    EXPECT_EQ(sys.g, Matrix::from_rows({{7, 1, 1, 0, 1, 1, 0},
                                        {1, 0, 7, 1, 1, 0, 0},
                                        {0, 7, 1, 0, 0, 0, 1},
                                        {1, 0, 0, 7, 0, 0, 1},
                                        {1, 0, 1, 0, 0, 0, 0},
                                        {1, 1, 0, 0, 0, 0, 0},
                                        {1, 1, 1, 1, 0, 0, 0}}));
    EXPECT_EQ(sys.e, (Vector{-12, -26, -17, -29, -4, -3, -10}));
    EXPECT_EQ(sys.primal_dim(), 4u);
    EXPECT_EQ(sys.dual_dim(), 3u);
    EXPECT_EQ(sys.lambda_offsets, (std::vector<std::size_t>{0, 2, 3}));
}

TEST(Assemble, SingleScalar) {
    const auto sys = assemble(fixture("single_scalar"));
    EXPECT_EQ(sys.g, Matrix::from_rows({{2}}));
    EXPECT_EQ(sys.e, (Vector{-2}));
    EXPECT_DOUBLE_EQ(sys.mu_f, 8.0);
    EXPECT_DOUBLE_EQ(sys.l_f, 8.0);
}

TEST(Assemble, FrozenSpectralConstants) {
    for (const auto& f : kFrozen) {
        const auto sys = assemble(fixture(f.name));
        EXPECT_NEAR(sys.sigma_max, f.sigma_max, 1e-13 * f.sigma_max) << f.name;
        EXPECT_NEAR(sys.sigma_min_positive, f.sigma_min_positive, 1e-12 * f.sigma_min_positive) << f.name;
        EXPECT_NEAR(sys.mu_f, f.mu_f, 1e-12 * f.mu_f) << f.name;
        EXPECT_NEAR(sys.l_f, f.l_f, 1e-13 * f.l_f) << f.name;
        EXPECT_EQ(sys.kernel_dim, f.kernel_dim) << f.name;
        EXPECT_DOUBLE_EQ(squared_norm(sys.e), f.e_squared) << f.name;
    }
}

TEST(Assemble, BlockedPaperConstants) {
    const auto sys = assemble(fixture("paper_example").with_layout(ActionLayout::blocked));
    EXPECT_NEAR(sys.mu_f, 0.013202757806659020914, 1e-14);
    EXPECT_NEAR(sys.l_f, 165.58227116589151867, 1e-11);
}

TEST(Assemble, SpectrumAgreesWithEigen) {
    for (const char* name : gne::test::kAllFixtures) {
        const auto sys = assemble(fixture(name));
        Eigen::BDCSVD<Eigen::MatrixXd> ref(to_eigen(sys.g));
        const auto& sv = ref.singularValues();
        EXPECT_NEAR(sys.sigma_max, sv(0), 1e-12 * sv(0)) << name;
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > 1e-12 * sv(0) ? 1 : 0;
        EXPECT_EQ(sys.kernel_dim, static_cast<std::size_t>(sv.size() - rank)) << name;
        EXPECT_NEAR(sys.sigma_min_positive, sv(rank - 1), 1e-11 * sv(0)) << name;
    }
}

TEST(Gap, PaperSolutionIsCertified) {
    const auto sys = assemble(fixture("paper_example"));
    const PrimalDual z(Vector{1, 2, 3, 4}, Vector{0, 0, 0});
    EXPECT_LE(gap(sys, z), 1e-14);
    const auto cert = certify_gne(sys, z, default_certification_tolerance(sys));
    EXPECT_TRUE(cert.accepted);
    for (double s : cert.stationarity_norms) EXPECT_EQ(s, 0.0);
    for (double r : cert.residual_norms) EXPECT_EQ(r, 0.0);
    EXPECT_THROW(certify_gne(sys, z, 0.0), std::invalid_argument);
}

TEST(Gap, ThreePlayerSolution) {
    const auto sys = assemble(fixture("three_player"));
    const PrimalDual z(Vector{1, -1, 2, 0, -2, 1}, Vector{1, -1, 2});
    EXPECT_EQ(gap(sys, z), 0.0);
    EXPECT_TRUE(certify_gne(sys, z, 1e-12).accepted);
}

TEST(Gap, ZeroPointEqualsSquaredNormOfE) {
    for (const char* name : gne::test::kAllFixtures) {
        const auto sys = assemble(fixture(name));
        EXPECT_EQ(gap(sys, PrimalDual(sys.primal_dim(), sys.dual_dim())), squared_norm(sys.e)) << name;
    }
}

TEST(Gap, RejectsWrongLength) {
    const auto sys = assemble(fixture("paper_example"));
    EXPECT_THROW(gap(sys, Vector(3, 0.0)), DimensionError);
}

TEST(Gradient, MatchesCentralDifferences) {
    RngStream rng(12);
    for (const char* name : gne::test::kAllFixtures) {
        const auto sys = assemble(fixture(name));
        for (int trial = 0; trial < 5; ++trial) {
            auto z = sample_std_normal(rng, sys.g.cols());
            const auto grad = gap_gradient(sys, z);
            for (std::size_t k = 0; k < z.size(); ++k) {
                const double keep = z[k];
                z[k] = keep + 1e-4;
                const double fp = gap(sys, z);
                z[k] = keep - 1e-4;
                const double fm = gap(sys, z);
                z[k] = keep;
                EXPECT_NEAR((fp - fm) / 2e-4, grad[k], 1e-6 * std::max(1.0, norm(grad))) << name;
            }
        }
    }
}

TEST(Gradient, PlayerPartialsAreSlicesOfTheFullGradient) {
    RngStream rng(13);
    for (const char* name : {"paper_example", "three_player"}) {
        const auto sys = assemble(fixture(name));
        const auto v = sample_std_normal(rng, sys.g.cols());
        const PrimalDual z(std::span<const double>(v).first(sys.primal_dim()),
                           std::span<const double>(v).subspan(sys.primal_dim()));
        const auto grad = gap_gradient(sys, z);
        for (std::size_t i = 0; i < sys.players_count(); ++i) {
            const auto p = gap_partials(sys, z, i);
            ASSERT_EQ(p.x.size(), sys.action_dim);
            for (std::size_t k = 0; k < p.x.size(); ++k) EXPECT_EQ(p.x[k], grad[sys.x_indices[i][k]]);
            for (std::size_t k = 0; k < p.lambda.size(); ++k)
                EXPECT_EQ(p.lambda[k], grad[sys.primal_dim() + sys.lambda_offsets[i] + k]);
        }
        EXPECT_THROW(gap_partials(sys, z, sys.players_count()), std::out_of_range);
    }
}

TEST(Gradient, PolyakLojasiewiczInequalityOnRandomPoints) {
    RngStream rng(14);
    for (const char* name : gne::test::kAllFixtures) {
        const auto sys = assemble(fixture(name));
        const double f_min = solution_oracle(sys).residual;
        for (int trial = 0; trial < 2000; ++trial) {
            auto z = sample_std_normal(rng, sys.g.cols());
            for (double& v : z) v *= 3.0;
            const double f = excess_gap(sys, z, f_min);
            const double scale = 1.0 + gap(sys, z);
            ASSERT_GE(squared_norm(gap_gradient(sys, z)), 2.0 * sys.mu_f * f - 1e-9 * scale) << name;
        }
    }
}
