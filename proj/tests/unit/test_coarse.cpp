#include "pwbddc/case.hpp"
#include "pwbddc/coarse.hpp"
#include "pwbddc/pipeline.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pwbddc;
using testing_support::random_matrix;
using testing_support::random_psd;
using testing_support::random_vector;

namespace {

CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

double rel(const CMatrix& A, const CMatrix& B) { return relative_difference(A, B); }

} // namespace

TEST(Scaling, ParseNames)
{
    EXPECT_EQ(parse_scaling("deluxe"), ScalingKind::Deluxe);
    EXPECT_EQ(parse_scaling("M1"), ScalingKind::Deluxe);
    EXPECT_EQ(parse_scaling("multiplicity"), ScalingKind::Multiplicity);
    EXPECT_EQ(parse_scaling("M2"), ScalingKind::Multiplicity);
    EXPECT_THROW(parse_scaling("rho"), ConfigError);
}

TEST(Scaling, HandExamples)
{
    auto m = scaling_matrices({eye(3), 5.0 * eye(3)}, ScalingKind::Multiplicity);
    EXPECT_LT(rel(m[0], 0.5 * eye(3)), 1e-16);
    EXPECT_LT(rel(m[1], 0.5 * eye(3)), 1e-16);
    auto d = scaling_matrices({eye(3), eye(3)}, ScalingKind::Deluxe);
    EXPECT_LT(rel(d[0], 0.5 * eye(3)), 1e-15);
    d = scaling_matrices({2.0 * eye(3), eye(3)}, ScalingKind::Deluxe);
    EXPECT_LT(rel(d[0], (2.0 / 3.0) * eye(3)), 1e-15);
    EXPECT_LT(rel(d[1], (1.0 / 3.0) * eye(3)), 1e-15);
    const auto e = scaling_matrices({eye(2), eye(2), eye(2), eye(2)}, ScalingKind::Multiplicity);
    EXPECT_LT(rel(e[2], 0.25 * eye(2)), 1e-16);
}

TEST(Scaling, DeluxePartitionOfIdentity)
{
    std::mt19937_64 rng(21);
    for (int k : {2, 4, 8}) {
        std::vector<CMatrix> S;
        for (int i = 0; i < k; ++i) S.push_back(random_psd(12, 6, rng));
        const auto D = scaling_matrices(S, ScalingKind::Deluxe);
        CMatrix sum = CMatrix::Zero(12, 12);
        for (const auto& x : D) sum += x;
        EXPECT_LT((sum - eye(12)).norm(), 1e-12);
        // D^(v) = (sum S)^{-1} S^(v) for all but the closing entry
        CMatrix total = CMatrix::Zero(12, 12);
        for (const auto& s : S) total += s;
        EXPECT_LT(rel(total * D[0], S[0]), 1e-10);
    }
}

TEST(Scaling, SingularDeluxeSumThrows)
{
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    EXPECT_THROW(scaling_matrices({a, a}, ScalingKind::Deluxe), SingularDeluxeSum);
}

TEST(ParallelSum, HandExamples)
{
    EXPECT_LT(rel(parallel_sum(eye(3), eye(3)), 0.5 * eye(3)), 1e-15);
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.5;
    EXPECT_LT((parallel_sum(a, eye(2)) - expected).norm(), 1e-15);
    // scalar harmonic combination: 1/(1/2 + 1/3 + 1/6) = 1
    EXPECT_LT(rel(parallel_sum({2.0 * eye(2), 3.0 * eye(2), 6.0 * eye(2)}), eye(2)), 1e-14);
}

TEST(ParallelSum, DominatedByEveryOperand)
{
    std::mt19937_64 rng(22);
    std::vector<CMatrix> S;
    for (int i = 0; i < 4; ++i) S.push_back(random_psd(10, i == 0 ? 4 : 10, rng));
    const CMatrix P = parallel_sum(S);
    EXPECT_LT(rel(P.adjoint(), P), 1e-14);
    double smax = 0.0;
    for (const auto& s : S) smax = std::max(smax, s.norm());
    for (int t = 0; t < 200; ++t) {
        const CVector x = random_vector(10, rng);
        double qmin = 1e300;
        for (const auto& s : S) qmin = std::min(qmin, std::real(x.dot(s * x)));
        EXPECT_LE(std::real(x.dot(P * x)), qmin + 1e-9 * smax * x.squaredNorm());
    }
}

TEST(Gevp, FaceGlobWithMultiplicityAndIdentities)
{
    const auto D = scaling_matrices({eye(4), eye(4)}, ScalingKind::Multiplicity);
    const Gevp g = build_gevp({eye(4), eye(4)}, {eye(4), eye(4)}, D);
    EXPECT_LT(rel(g.A, 0.5 * eye(4)), 1e-15);
    EXPECT_LT(rel(g.B, 0.5 * eye(4)), 1e-15);
    const auto sp = solve_gevp_and_split(g.A, g.B, 1.0);
    EXPECT_EQ(sp.n_dual(), 4);
    for (double l : sp.dual_values) EXPECT_NEAR(l, 1.0, 1e-14);
}

TEST(Gevp, EdgeGlobSumsTwelveTerms)
{
    std::mt19937_64 rng(23);
    std::vector<CMatrix> S;
    std::vector<CMatrix> Sbar;
    for (int i = 0; i < 4; ++i) {
        S.push_back(random_psd(5, 5, rng));
        Sbar.push_back(0.5 * S.back());
    }
    const auto D = scaling_matrices(S, ScalingKind::Deluxe);
    CMatrix ref = CMatrix::Zero(5, 5);
    int terms = 0;
    for (int v = 0; v < 4; ++v)
        for (int u = 0; u < 4; ++u)
            if (u != v) {
                ref += D[u].adjoint() * S[v] * D[u];
                ++terms;
            }
    EXPECT_EQ(terms, 12);
    const Gevp g = build_gevp(S, Sbar, D);
    EXPECT_LT(rel(g.A, ref), 1e-12);
    EXPECT_LE((g.A - g.A.adjoint()).norm(), 1e-12 * g.A.norm());
    EXPECT_LT(rel(g.B, parallel_sum(Sbar)), 1e-12);
}

TEST(Split, ThresholdExamples)
{
    auto all_one = solve_gevp_and_split(eye(3), eye(3), 1.0);
    EXPECT_EQ(all_one.n_dual(), 3);
    EXPECT_EQ(all_one.n_primal(), 0);

    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 100.0;
    const auto two = solve_gevp_and_split(A, eye(2), 10.0);
    EXPECT_EQ(two.n_dual(), 1);
    EXPECT_EQ(two.n_primal(), 1);
    EXPECT_NEAR(two.dual_values[0], 1.0, 1e-13);
    EXPECT_NEAR(two.primal_values[0], 100.0, 1e-11);

    const auto zero_b = solve_gevp_and_split(eye(3), CMatrix::Zero(3, 3), 1e6);
    EXPECT_EQ(zero_b.n_primal(), 3);
    for (double l : zero_b.primal_values) EXPECT_TRUE(std::isinf(l));

    const auto joint = solve_gevp_and_split(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 1.0);
    EXPECT_EQ(joint.n_dual(), 2);
}

TEST(Split, RandomPencilResidualsOrderingAndBOrthogonality)
{
    std::mt19937_64 rng(24);
    const Index n = 16;
    const CMatrix A = random_psd(n, n, rng);
    // rank-deficient B with a mixed null space
    CMatrix B = random_psd(n, 11, rng);
    const auto sp = solve_gevp_and_split(A, B, 3.0);
    EXPECT_EQ(sp.size(), n);
    const CMatrix T = sp.T();
    EXPECT_GT(std::abs(T.determinant()), 0.0);
    const double an = A.norm();
    const double bn = B.norm();
    auto check = [&](const CMatrix& V, const std::vector<double>& lam) {
        double last = 0.0;
        for (Index j = 0; j < V.cols(); ++j) {
            const double l = lam[static_cast<std::size_t>(j)];
            if (std::isinf(l)) {
                EXPECT_LT((B * V.col(j)).norm(), 1e-10 * bn * V.col(j).norm());
                continue;
            }
            EXPECT_LE((A * V.col(j) - l * (B * V.col(j))).norm(), 1e-8 * (an + std::abs(l) * bn) * V.col(j).norm());
            if (l != 0.0) {
                EXPECT_GE(std::abs(l), last - 1e-12);
                last = std::abs(l);
            }
        }
    };
    check(sp.T_dual, sp.dual_values);
    check(sp.T_primal, sp.primal_values);
    for (double l : sp.dual_values) EXPECT_LE(std::abs(l), 3.0 * (1.0 + 1e-12));
    EXPECT_LT((sp.T_primal.adjoint() * B * sp.T_dual).norm(), 1e-8 * bn * sp.T_primal.norm() * sp.T_dual.norm());
    // dual vectors in range(B) are B-orthonormal
    CMatrix G = sp.T_dual.adjoint() * B * sp.T_dual;
    for (Index j = 0; j < G.cols(); ++j)
        if (sp.dual_values[static_cast<std::size_t>(j)] != 0.0) EXPECT_NEAR(std::real(G(j, j)), 1.0, 1e-10);
}

TEST(Split, AllPrimalAndAllDual)
{
    EXPECT_EQ(all_primal(5).n_primal(), 5);
    EXPECT_EQ(all_primal(5).n_dual(), 0);
    EXPECT_EQ(all_dual(5).n_dual(), 5);
}

TEST(CoarseSpace, OffsetsAndCounts)
{
    const std::vector<IndexList> nb{{0}, {0, 1}, {0, 1}, {0, 1, 2, 3}, {0, 1, 2, 3, 4, 5, 6, 7}, {1}};
    const GlobPartition gp = partition_by_neighbours(8, nb);
    std::vector<GlobEigenSplit> splits(gp.globs.size());
    for (std::size_t g = 0; g < gp.globs.size(); ++g) {
        const Index n = static_cast<Index>(gp.globs[g].dofs.size());
        switch (gp.globs[g].kind) {
        case GlobKind::Face: splits[g] = solve_gevp_and_split(CMatrix::Identity(n, n) * 5.0, eye(n), 2.0); break;
        case GlobKind::Edge:
        case GlobKind::Vertex: splits[g] = all_primal(n); break;
        case GlobKind::Interior: splits[g] = all_dual(0); break;
        }
    }
    const CoarseSpace cs = build_coarse_space(gp, splits);
    EXPECT_EQ(cs.counts.pnumF, 2);
    EXPECT_EQ(cs.counts.pnumE, 1);
    EXPECT_EQ(cs.counts.pnumV, 1);
    EXPECT_EQ(cs.counts.pnum, 4);
    Index expected = 0;
    for (std::size_t g = 0; g < gp.globs.size(); ++g) {
        EXPECT_EQ(cs.primal_offset[g], expected);
        expected += cs.primal_size[g];
    }
}

namespace {

std::unique_ptr<BddcLevel> huge_threshold_level(int n, std::shared_ptr<AssembledSystem>& sys, std::unique_ptr<Mesh>& mesh,
                                                std::unique_ptr<WaveBasis>& basis, std::unique_ptr<FormEvaluator>& form)
{
    CaseConfig c;
    c.p = 6;
    c.n = n;
    c.m = 1;
    c.theta_f = "1e12";
    c.theta_e = "1e12";
    mesh = std::make_unique<Mesh>(mesh_config(c));
    basis = std::make_unique<WaveBasis>(6);
    form = std::make_unique<FormEvaluator>(*mesh, *basis);
    sys = std::make_shared<AssembledSystem>(assemble_global(*form, assemble_rhs_exact(2.0 * M_PI, example_direction())));
    BddcOptions o = bddc_options(c);
    o.keep_glob_blocks = true;
    return std::make_unique<BddcLevel>(make_pwls_level(*form, std::shared_ptr<const SparseMatrix>(sys, &sys->matrix), {}), o);
}

} // namespace

TEST(CoarseSpace, HugeThresholdsLeaveOnlyVertices)
{
    std::shared_ptr<AssembledSystem> sys;
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<WaveBasis> basis;
    std::unique_ptr<FormEvaluator> form;
    const auto level = huge_threshold_level(2, sys, mesh, basis, form);
    for (const GlobData& g : level->globs()) {
        if (g.kind != GlobKind::Face && g.kind != GlobKind::Edge) continue;
        const RVector ev = hermitian_eigen(parallel_sum(g.Sbar)).values;
        EXPECT_GT(ev.minCoeff(), 1e-10 * ev.maxCoeff());
    }
    const CoarseCounts cc = level->coarse_space().counts;
    EXPECT_EQ(cc.pnumF, 0);
    EXPECT_EQ(cc.pnumE, 0);
    EXPECT_EQ(cc.pnumV, 6);
    EXPECT_EQ(cc.pnum, cc.pnumV);
    EXPECT_EQ(level->coarse_matrix().rows(), cc.pnum);
}

// Slabs that do not reach the boundary carry the plane-wave kernel of the jump terms, so B is
// singular there and those directions stay primal for any threshold.
TEST(CoarseSpace, FloatingSlabKernelsStayPrimal)
{
    std::shared_ptr<AssembledSystem> sys;
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<WaveBasis> basis;
    std::unique_ptr<FormEvaluator> form;
    const auto level = huge_threshold_level(3, sys, mesh, basis, form);
    const CoarseCounts cc = level->coarse_space().counts;
    EXPECT_GT(cc.pnumF + cc.pnumE, 0);
    EXPECT_EQ((cc.pnumF + cc.pnumE) % 6, 0);
    for (const GlobData& g : level->globs())
        for (double l : g.split.primal_values) EXPECT_GT(l, 1e12) << to_string(g.kind);
    EXPECT_EQ(level->coarse_matrix().rows(), cc.pnum);
}
