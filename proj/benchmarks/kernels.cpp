#include "pwbddc/case.hpp"
#include "pwbddc/integrals.hpp"
#include "pwbddc/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace pwbddc;

namespace {

struct Problem {
    CaseConfig config;
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<WaveBasis> basis;
    std::unique_ptr<FormEvaluator> form;
    std::shared_ptr<AssembledSystem> sys;

    Problem(int p, int n, int m)
    {
        config.kappa = "8pi";
        config.p = p;
        config.n = n;
        config.m = m;
        mesh = std::make_unique<Mesh>(mesh_config(config));
        basis = std::make_unique<WaveBasis>(p);
        form = std::make_unique<FormEvaluator>(*mesh, *basis);
        sys = std::make_shared<AssembledSystem>(
            assemble_global(*form, assemble_rhs_exact(resolve(config).kappa, example_direction())));
    }
    LevelProblem level() const
    {
        return make_pwls_level(*form, std::shared_ptr<const SparseMatrix>(sys, &sys->matrix), {});
    }
};

CMatrix random_hpd(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CMatrix G(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) G(i, j) = Complex(nd(rng), nd(rng));
    return G * G.adjoint() + CMatrix::Identity(n, n);
}

} // namespace

static void BM_RectIntegral(benchmark::State& state)
{
    Box r;
    r.lo = Vec3(0.1, 0.2, 0.5);
    r.hi = Vec3(0.3, 0.4, 0.5);
    Vec3 d(17.0, -3.0, 5.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oscillatory_rect_integral(d, r));
        d[0] += 1e-9;
    }
}
BENCHMARK(BM_RectIntegral);

static void BM_InteriorFaceBlock(benchmark::State& state)
{
    const Problem pr(static_cast<int>(state.range(0)), 1, 2);
    const InteriorFace& f = pr.mesh->interior_faces().front();
    CMatrix out;
    for (auto _ : state) {
        pr.form->interior_block(f, f.rect, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_InteriorFaceBlock)->Arg(18)->Arg(28);

static void BM_GlobalAssembly(benchmark::State& state)
{
    const Problem pr(18, 2, 2);
    const BoundaryData data = assemble_rhs_exact(8.0 * M_PI, example_direction());
    for (auto _ : state) benchmark::DoNotOptimize(assemble_global(*pr.form, data).matrix.nonZeros());
}
BENCHMARK(BM_GlobalAssembly)->Unit(benchmark::kMillisecond);

static void BM_GevpSplit(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    const Index n = state.range(0);
    const CMatrix A = random_hpd(n, rng);
    const CMatrix B = random_hpd(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gevp_and_split(A, B, 10.0).n_primal());
}
BENCHMARK(BM_GevpSplit)->Arg(72)->Arg(162)->Arg(252)->Unit(benchmark::kMillisecond);

static void BM_SchurApply(benchmark::State& state)
{
    const Problem pr(18, 3, 2);
    const LevelProblem lp = pr.level();
    const SchurOperator S(lp.matrix, lp.partition);
    const CVector x = CVector::Ones(S.size());
    for (auto _ : state) benchmark::DoNotOptimize(S.apply(x).data());
}
BENCHMARK(BM_SchurApply)->Unit(benchmark::kMillisecond);

static void BM_PreconditionerApply(benchmark::State& state)
{
    const Problem pr(18, 3, 2);
    const BddcLevel level(pr.level(), bddc_options(pr.config));
    const CVector r = CVector::Ones(level.schur().size());
    for (auto _ : state) benchmark::DoNotOptimize(level.apply(r).data());
}
BENCHMARK(BM_PreconditionerApply)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
