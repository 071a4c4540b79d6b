#include "pwbddc/case.hpp"
#include "pwbddc/oracle.hpp"
#include "pwbddc/pipeline.hpp"

#include "support.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

using namespace pwbddc;

namespace {

struct Pipeline {
    CaseConfig config;
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<WaveBasis> basis;
    std::unique_ptr<FormEvaluator> form;
    std::shared_ptr<AssembledSystem> sys;

    explicit Pipeline(CaseConfig c) : config(std::move(c))
    {
        const ResolvedCase rc = resolve(config);
        mesh = std::make_unique<Mesh>(mesh_config(config));
        basis = std::make_unique<WaveBasis>(config.p);
        form = std::make_unique<FormEvaluator>(*mesh, *basis);
        sys = std::make_shared<AssembledSystem>(assemble_global(*form, assemble_rhs_exact(rc.kappa, example_direction())));
    }
    LevelProblem problem() const
    {
        PwlsLevelOptions o;
        o.economic = config.economic;
        o.eta = resolve(config).eta;
        return make_pwls_level(*form, std::shared_ptr<const SparseMatrix>(sys, &sys->matrix), o);
    }
    PcgOptions pcg_options() const
    {
        PcgOptions o;
        o.rtol = config.rtol;
        o.maxit = config.maxit;
        return o;
    }
};

CaseConfig tiny(const std::string& theta = "1000", const std::string& scaling = "deluxe")
{
    CaseConfig c;
    c.kappa = "2pi";
    c.p = 6;
    c.n = 2;
    c.m = 1;
    c.theta_f = theta;
    c.theta_e = theta;
    c.scaling = scaling;
    return c;
}

} // namespace

TEST(Bddc, PreconditionerHermitianAndSpectrumAboveOne)
{
    for (const char* scaling : {"deluxe", "multiplicity"})
        for (const char* theta : {"1000", "2", "1+log(m)"}) {
            SCOPED_TRACE(testing::Message() << scaling << " theta=" << theta);
            const DenseReference ref = dense_reference(tiny(theta, scaling));
            EXPECT_LT(ref.preconditioner_hermitian_defect, 1e-9);
            EXPECT_GE(ref.spectrum.minCoeff(), 1.0 - 1e-8);
            EXPECT_TRUE(std::isfinite(ref.spectrum.maxCoeff()));
            // Lanczos estimates lie inside the dense spectrum
            EXPECT_GE(ref.report.lambda_min, ref.spectrum.minCoeff() - 1e-8);
            EXPECT_LE(ref.report.lambda_max, ref.spectrum.maxCoeff() * (1.0 + 1e-8));
        }
}

TEST(Bddc, SolutionMatchesDenseDirectSolve)
{
    for (const char* scaling : {"deluxe", "multiplicity"}) {
        CaseConfig c = tiny("1000", scaling);
        c.rtol = 1e-10;
        const DenseReference ref = dense_reference(c);
        const double rel = (ref.bddc_solution - ref.direct_solution).norm() / ref.direct_solution.norm();
        EXPECT_LT(rel, 1e-6) << scaling;
        EXPECT_TRUE(ref.report.converged);
    }
    // the default tolerance still honours the full-residual contract
    const DenseReference ref = dense_reference(tiny());
    EXPECT_LE(ref.report.full_residual, 5.0 * 1e-5);
}

TEST(Bddc, EverythingPrimalIsAnExactCoarseSolve)
{
    CaseConfig c = tiny("1e-9");
    const Pipeline s(c);
    const SolveResult r = full_solve(s.problem(), s.sys->rhs, bddc_options(c), s.pcg_options());
    EXPECT_LE(r.report.iterations, 2);
    EXPECT_EQ(r.report.levels.front().counts.pnum, r.report.levels.front().interface_size);
}

TEST(Bddc, ThetaOneGivesAFewIterations)
{
    CaseConfig c = tiny("1");
    const Pipeline s(c);
    const SolveResult r = full_solve(s.problem(), s.sys->rhs, bddc_options(c), s.pcg_options());
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(r.report.iterations, 5);
}

TEST(Bddc, SingleSubdomainIsADirectSolve)
{
    CaseConfig c = tiny();
    c.n = 1;
    c.m = 2;
    const Pipeline s(c);
    const SolveResult r = full_solve(s.problem(), s.sys->rhs, bddc_options(c), s.pcg_options());
    EXPECT_EQ(r.report.iterations, 0);
    const CVector ref = CMatrix(s.sys->matrix).lu().solve(s.sys->rhs);
    EXPECT_LT((r.u - ref).norm() / ref.norm(), 1e-10);
}

TEST(Bddc, TwoLevelCoarseSizesMatchCounts)
{
    const CaseConfig c = tiny("2");
    const Pipeline s(c);
    const BddcLevel level(s.problem(), bddc_options(c));
    EXPECT_EQ(level.next(), nullptr);
    EXPECT_EQ(level.coarse_matrix().rows(), level.coarse_space().counts.pnum);
    const CoarseCounts cc = level.coarse_space().counts;
    EXPECT_EQ(cc.pnum, cc.pnumF + cc.pnumE + cc.pnumV);
    const CMatrix Sc(level.coarse_matrix());
    EXPECT_LT(relative_difference(Sc.adjoint(), Sc), 1e-13);
}

TEST(Bddc, ThreeLevelHierarchy)
{
    CaseConfig c = tiny("4m");
    c.n = 4;
    c.m = 1;
    c.levels = 3;
    const Pipeline s(c);
    const BddcLevel level(s.problem(), bddc_options(c));
    ASSERT_NE(level.next(), nullptr);
    EXPECT_EQ(level.next()->next(), nullptr);
    EXPECT_EQ(level.next()->partition().subdomain_count, 8);
    EXPECT_EQ(level.next()->schur().matrix().rows(), level.coarse_space().counts.pnum);
    EXPECT_LT(level.next()->coarse_space().counts.pnum, level.coarse_space().counts.pnum);
    const auto reps = level.reports();
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[1].level, 1);

    const SolveResult r = full_solve(s.problem(), s.sys->rhs, bddc_options(c), s.pcg_options());
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(r.report.full_residual, 5.0 * c.rtol);
    EXPECT_GT(r.report.levels[0].coarse_pcg_calls, 0);
}

TEST(Bddc, OddGridCannotBeCoarsened)
{
    CaseConfig c = tiny();
    c.n = 3;
    c.levels = 3;
    const Pipeline s(c);
    EXPECT_THROW(BddcLevel(s.problem(), bddc_options(c)), ConfigError);
}

TEST(Bddc, ThreadCountDoesNotChangeTheResult)
{
    CaseConfig c = tiny("2");
    c.n = 3;
    const Pipeline s(c);
    BddcOptions o = bddc_options(c);
    const SolveResult one = full_solve(s.problem(), s.sys->rhs, o, s.pcg_options());
    o.threads = 3;
    const SolveResult three = full_solve(s.problem(), s.sys->rhs, o, s.pcg_options());
    EXPECT_EQ(one.report.iterations, three.report.iterations);
    EXPECT_EQ((one.u - three.u).norm(), 0.0);
}

TEST(Bddc, AveragingAndInjectionInvariants)
{
    const CaseConfig c = tiny("2");
    const Pipeline s(c);
    BddcOptions o = bddc_options(c);
    const BddcLevel level(s.problem(), o);
    const PartialVector w = random_partial_vector(level, 3);
    const CVector u = average(level, w);
    // inject then average is the identity on the interface
    EXPECT_LT((average(level, inject(level, u)) - u).norm() / u.norm(), 1e-10);
    // continuous vectors are fixed by E_D
    const auto c1 = local_values(level, inject(level, u));
    for (std::size_t g = 0; g < level.globs().size(); ++g) {
        const GlobData& gd = level.globs()[g];
        if (gd.kind == GlobKind::Interior) continue;
        for (std::size_t k = 1; k < c1[g].size(); ++k) EXPECT_LT((c1[g][k] - c1[g][0]).norm(), 1e-10 * (1.0 + c1[g][0].norm()));
        EXPECT_LT((c1[g][0] - extract(u, gd.interface_pos)).norm(), 1e-10 * (1.0 + u.norm()));
    }
}

TEST(Bddc, DeluxeFromSbarAlsoBoundsTheSpectrum)
{
    CaseConfig c = tiny("2");
    c.deluxe_from_sbar = true;
    const DenseReference ref = dense_reference(c);
    EXPECT_GE(ref.spectrum.minCoeff(), 1.0 - 1e-8);
}
