#include "pwbddc/assembly.hpp"
#include "pwbddc/case.hpp"
#include "pwbddc/dense.hpp"
#include "pwbddc/integrals.hpp"
#include "pwbddc/oracle.hpp"

#include "support.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

using namespace pwbddc;

namespace {

struct Problem {
    MeshConfig mc;
    Mesh mesh;
    WaveBasis basis;
    FormEvaluator form;
    BoundaryData data;

    Problem(int n, int m, int p, double kappa)
        : mc([&] {
              MeshConfig c;
              c.n = n;
              c.m = m;
              c.p = p;
              c.kappa = kappa;
              return c;
          }()),
          mesh(mc), basis(p), form(mesh, basis), data(assemble_rhs_exact(kappa, example_direction()))
    {
    }
};

} // namespace

TEST(Assembly, ExampleDirection)
{
    const Vec3 v1(std::tan(-M_PI / 10.0), 0.0, std::tan(M_PI / 5.0));
    EXPECT_NEAR((example_direction() - v1 / v1.norm()).norm(), 0.0, 1e-15);
}

TEST(Assembly, RobinDataFromExactSolution)
{
    const double kappa = 3.0;
    const Vec3 v0 = example_direction();
    const BoundaryData data = assemble_rhs_exact(kappa, v0);
    const Vec3 perp = Vec3(0.0, 1.0, 0.0);
    ASSERT_NEAR(perp.dot(v0), 0.0, 1e-15);
    const auto t1 = data.robin(perp);
    ASSERT_EQ(t1.size(), 1u);
    EXPECT_NEAR(std::abs(t1[0].coefficient - Complex(0.0, kappa)), 0.0, 1e-14);
    EXPECT_NEAR((t1[0].wavevector - kappa * v0).norm(), 0.0, 1e-14);
    const auto t2 = data.robin(v0);
    EXPECT_NEAR(std::abs(t2[0].coefficient - Complex(0.0, 2.0 * kappa)), 0.0, 1e-14);
    EXPECT_THROW(assemble_rhs_exact(kappa, Vec3(1.0, 1.0, 0.0)), ConfigError);
}

TEST(Assembly, GlobalMatrixHermitianAndPositiveDefinite)
{
    const Problem pr(2, 1, 6, 2.0 * M_PI);
    const AssembledSystem sys = assemble_global(pr.form, pr.data);
    const CMatrix A(sys.matrix);
    EXPECT_EQ((A - A.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    const RVector ev = hermitian_eigen(A).values;
    EXPECT_GT(ev.minCoeff(), 0.0);
}

TEST(Assembly, ClosedFormsMatchQuadratureAssembly)
{
    const Problem pr(2, 1, 6, 2.0 * M_PI);
    const AssembledSystem sys = assemble_global(pr.form, pr.data);
    const QuadratureSystem q = quadrature_system(pr.mesh, pr.basis, pr.data, 20);
    EXPECT_LT(relative_difference(CMatrix(sys.matrix), q.matrix), 1e-10);
    EXPECT_LT((sys.rhs - q.rhs).norm() / q.rhs.norm(), 1e-10);
}

TEST(Assembly, MixedBoundaryKindsMatchQuadrature)
{
    MeshConfig mc;
    mc.n = 1;
    mc.m = 2;
    mc.p = 6;
    mc.kappa = 5.0;
    mc.boundary = {BoundaryKind::Dirichlet, BoundaryKind::Neumann, BoundaryKind::Robin,
                   BoundaryKind::Dirichlet, BoundaryKind::Neumann, BoundaryKind::Robin};
    const Mesh mesh(mc);
    const WaveBasis basis(6);
    const FormEvaluator form(mesh, basis);
    const BoundaryData data = assemble_rhs_exact(5.0, example_direction());
    const AssembledSystem sys = assemble_global(form, data);
    const QuadratureSystem q = quadrature_system(mesh, basis, data, 20);
    EXPECT_LT(relative_difference(CMatrix(sys.matrix), q.matrix), 1e-10);
    EXPECT_LT((sys.rhs - q.rhs).norm() / q.rhs.norm(), 1e-10);
}

TEST(Assembly, MissingBoundaryDataThrows)
{
    const Problem pr(1, 1, 6, 1.0);
    BoundaryData data = pr.data;
    data.robin = nullptr;
    EXPECT_THROW(assemble_global(pr.form, data), ConfigError);
}

// A single element cannot represent exp(i kappa v0.x) exactly; the least-squares solution must
// stay close to the best L2 approximation from the same plane-wave space.
TEST(Assembly, SingleElementSolveIsNearBestApproximation)
{
    const double kappa = 2.0 * M_PI;
    const Problem pr(1, 1, 28, kappa);
    const AssembledSystem sys = assemble_global(pr.form, pr.data);
    const CVector u = CMatrix(sys.matrix).lu().solve(sys.rhs);
    const double err = l2_relative_error(pr.mesh, pr.basis, u, kappa, example_direction());

    const int p = 28;
    const Box cell = pr.mesh.element_box(0);
    CMatrix G(p, p);
    CVector b(p);
    for (int t = 0; t < p; ++t) {
        b[t] = oscillatory_box_integral(kappa * (example_direction() - pr.basis.directions[t]), cell);
        for (int s = 0; s < p; ++s)
            G(t, s) = oscillatory_box_integral(kappa * (pr.basis.directions[s] - pr.basis.directions[t]), cell);
    }
    const CVector c = G.lu().solve(b);
    const double best = std::sqrt(std::max(0.0, 1.0 - 2.0 * std::real(b.dot(c)) + std::real(c.dot(G * c))));
    EXPECT_NEAR(best, 0.0964, 5e-4);
    EXPECT_GE(err, best * (1.0 - 1e-9));
    EXPECT_LT(err, 1.2 * best);
}

TEST(LocalForms, SingleSubdomainEqualsGlobalForm)
{
    const Problem pr(1, 2, 6, 4.0);
    const AssembledSystem sys = assemble_global(pr.form, pr.data);
    const LocalForm f = assemble_subdomain_form(pr.form, 0);
    EXPECT_EQ(static_cast<Index>(f.dofs.size()), pr.mesh.dof_count());
    EXPECT_LT(relative_difference(f.matrix, CMatrix(sys.matrix)), 1e-14);
}

TEST(LocalForms, TilingOfTheGlobalForm)
{
    for (int m : {1, 2}) {
        const Problem pr(2, m, 6, 2.0 * M_PI);
        const AssembledSystem sys = assemble_global(pr.form, pr.data);
        const auto forms = assemble_subdomain_forms(pr.form);
        std::mt19937_64 rng(5);
        for (int t = 0; t < 100; ++t) {
            const CVector u = testing_support::random_vector(pr.mesh.dof_count(), rng);
            const CVector v = testing_support::random_vector(pr.mesh.dof_count(), rng);
            Complex sum{0.0, 0.0};
            for (const auto& f : forms) sum += local_form_value(f, u, v);
            const Complex global = v.dot(sys.matrix * u);
            const double scale = std::sqrt(std::real(u.dot(sys.matrix * u)) * std::real(v.dot(sys.matrix * v)));
            ASSERT_LT(std::abs(sum - global) / scale, 1e-10);
        }
        for (const auto& f : forms) {
            EXPECT_LT(relative_difference(f.matrix.adjoint(), f.matrix), 1e-15);
            const RVector ev = hermitian_eigen(hermitian_part(f.matrix)).values;
            EXPECT_GE(ev.minCoeff(), -1e-10 * ev.maxCoeff());
        }
    }
}

// Clipped pieces of every interior face over the subdomains containing both elements add up
// to the whole face.
TEST(LocalForms, ClippedFacesTileEachFace)
{
    MeshConfig mc;
    mc.n = 2;
    mc.m = 1;
    mc.p = 1;
    const Mesh mesh(mc);
    auto area = [](const Box& r, int axis) { return r.extent((axis + 1) % 3) * r.extent((axis + 2) % 3); };
    for (const auto& f : mesh.interior_faces()) {
        const IndexList a = element_owners(mc, mesh.element_triple(f.lower));
        const IndexList b = element_owners(mc, mesh.element_triple(f.upper));
        double total = 0.0;
        int pieces = 0;
        for (Index s : a) {
            if (!std::binary_search(b.begin(), b.end(), s)) continue;
            const Box clip = f.rect.intersect(subdomain_box(mc, subdomain_triple(2, s)));
            const double ar = std::max(0.0, clip.extent((f.axis + 1) % 3)) * std::max(0.0, clip.extent((f.axis + 2) % 3));
            total += ar;
            pieces += ar > 0.0 ? 1 : 0;
        }
        EXPECT_NEAR(total, area(f.rect, f.axis), 1e-14);
        const Triple lo = mesh.element_triple(f.lower);
        const Triple hi = mesh.element_triple(f.upper);
        if (lo[0] == 1 && hi[0] == 1 && f.axis == 1 && lo[2] == 0) EXPECT_EQ(pieces, 2);
    }
}

TEST(LocalForms, InteriorBlocksArePositiveDefinite)
{
    const Problem pr(2, 2, 6, 2.0 * M_PI);
    const AssembledSystem sys = assemble_global(pr.form, pr.data);
    const GlobPartition gp = classify_globs(pr.mc, pr.mesh);
    const CMatrix A(sys.matrix);
    for (Index r = 0; r < gp.subdomain_count; ++r) {
        const IndexList& I = gp.subdomain_interior[r];
        const RVector ev = hermitian_eigen(extract(A, I, I)).values;
        EXPECT_GT(ev.minCoeff(), 0.0);
    }
}
