#include "pwbddc/oracle.hpp"

#include "pwbddc/integrals.hpp"
#include "pwbddc/pipeline.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <random>

namespace pwbddc {

namespace {

struct FaceQuadrature {
    std::vector<Vec3> points;
    std::vector<double> weights;
};

FaceQuadrature face_quadrature(const Box& rect, int normal_axis, int order)
{
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(order, x, w);
    int a1 = (normal_axis + 1) % 3;
    int a2 = (normal_axis + 2) % 3;
    if (a1 > a2) std::swap(a1, a2);
    FaceQuadrature q;
    const double h1 = 0.5 * rect.extent(a1);
    const double h2 = 0.5 * rect.extent(a2);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            Vec3 pt;
            pt[normal_axis] = rect.lo[normal_axis];
            pt[a1] = rect.lo[a1] + h1 * (x[i] + 1.0);
            pt[a2] = rect.lo[a2] + h2 * (x[j] + 1.0);
            q.points.push_back(pt);
            q.weights.push_back(w[i] * w[j] * h1 * h2);
        }
    return q;
}

CMatrix weighted_gram(const CMatrix& F, const std::vector<double>& w)
{
    CMatrix WF = F;
    for (Index q = 0; q < F.rows(); ++q) WF.row(q) *= w[static_cast<std::size_t>(q)];
    return F.adjoint() * WF;
}

CVector random_vector(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CVector v(n);
    for (Index i = 0; i < n; ++i) v[i] = Complex(nd(rng), nd(rng));
    return v;
}

double spectral_norm(const CMatrix& A)
{
    if (A.size() == 0) return 0.0;
    return hermitian_eigen(hermitian_part(A)).values.cwiseAbs().maxCoeff();
}

CheckResult check(std::string name, double value, double threshold)
{
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.threshold = threshold;
    r.passed = std::isfinite(value) && value <= threshold;
    return r;
}

struct OracleProblem {
    MeshConfig mc;
    ResolvedCase rc;
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<WaveBasis> basis;
    std::unique_ptr<FormEvaluator> form;
    std::shared_ptr<AssembledSystem> system;
    BoundaryData data;

    explicit OracleProblem(const CaseConfig& config)
    {
        rc = resolve(config);
        mc = mesh_config(config);
        const Index N = mc.elements_per_axis();
        if (N * N * N * mc.p > oracle_dof_cap)
            throw SizeCapExceeded("oracle configurations are capped at " + std::to_string(oracle_dof_cap) + " dofs, got " +
                                  std::to_string(N * N * N * mc.p));
        mesh = std::make_unique<Mesh>(mc);
        basis = std::make_unique<WaveBasis>(mc.p);
        form = std::make_unique<FormEvaluator>(*mesh, *basis);
        data = assemble_rhs_exact(rc.kappa, example_direction());
        system = std::make_shared<AssembledSystem>(assemble_global(*form, data));
    }

    LevelProblem level(const CaseConfig& config) const
    {
        PwlsLevelOptions lo;
        lo.economic = config.economic;
        lo.eta = rc.eta;
        return make_pwls_level(*form, std::shared_ptr<const SparseMatrix>(system, &system->matrix), lo);
    }
};

} // namespace

QuadratureSystem quadrature_system(const Mesh& mesh, const WaveBasis& basis, const BoundaryData& data, int order)
{
    const int p = basis.size();
    const Index ndof = mesh.dof_count();
    FormWeights fw;
    fw.h = mesh.h();
    QuadratureSystem sys;
    sys.matrix = CMatrix::Zero(ndof, ndof);
    sys.rhs = CVector::Zero(ndof);
    const Complex iu{0.0, 1.0};

    for (const auto& face : mesh.interior_faces()) {
        const FaceQuadrature q = face_quadrature(face.rect, face.axis, order);
        const Index nq = static_cast<Index>(q.points.size());
        const double kk = mesh.kappa(face.lower);
        const double kj = mesh.kappa(face.upper);
        CMatrix jump(nq, 2 * p);
        CMatrix flux(nq, 2 * p);
        for (Index i = 0; i < nq; ++i)
            for (int a = 0; a < 2 * p; ++a) {
                const double k = a < p ? kk : kj;
                const double sign = a < p ? 1.0 : -1.0;
                const Vec3& dir = basis.directions[a % p];
                const Complex phi = std::exp(iu * k * dir.dot(q.points[static_cast<std::size_t>(i)]));
                jump(i, a) = sign * phi;
                flux(i, a) = sign * iu * k * dir[face.axis] * phi;
            }
        const CMatrix block = fw.alpha(kk, kj) * weighted_gram(jump, q.weights) + fw.beta(kk, kj) * weighted_gram(flux, q.weights);
        const Index base[2] = {face.lower * p, face.upper * p};
        for (int s = 0; s < 2 * p; ++s)
            for (int t = 0; t < 2 * p; ++t) sys.matrix(base[t / p] + t % p, base[s / p] + s % p) += block(t, s);
    }

    for (const auto& face : mesh.boundary_faces()) {
        const FaceQuadrature q = face_quadrature(face.rect, face.axis, order);
        const Index nq = static_cast<Index>(q.points.size());
        const double k = mesh.kappa(face.element);
        const Vec3 n = face.normal();
        CMatrix trace(nq, p);
        double theta = 0.0;
        const BoundaryData::Terms* terms = nullptr;
        for (Index i = 0; i < nq; ++i)
            for (int a = 0; a < p; ++a) {
                const Vec3& dir = basis.directions[a];
                const Complex phi = std::exp(iu * k * dir.dot(q.points[static_cast<std::size_t>(i)]));
                switch (face.kind) {
                case BoundaryKind::Dirichlet: trace(i, a) = phi; break;
                case BoundaryKind::Neumann: trace(i, a) = iu * k * dir.dot(n) * phi; break;
                case BoundaryKind::Robin: trace(i, a) = iu * k * (1.0 + dir.dot(n)) * phi; break;
                }
            }
        switch (face.kind) {
        case BoundaryKind::Dirichlet: theta = fw.theta_dirichlet(k); terms = &data.dirichlet; break;
        case BoundaryKind::Neumann: theta = fw.theta_neumann(k); terms = &data.neumann; break;
        case BoundaryKind::Robin: theta = fw.theta_robin(k); terms = &data.robin; break;
        }
        sys.matrix.block(face.element * p, face.element * p, p, p) += theta * weighted_gram(trace, q.weights);
        if (!*terms) throw ConfigError("missing boundary data for a tagged face");
        const auto g_terms = (*terms)(n);
        CVector g = CVector::Zero(nq);
        for (Index i = 0; i < nq; ++i)
            for (const auto& t : g_terms) g[i] += t.coefficient * std::exp(iu * t.wavevector.dot(q.points[static_cast<std::size_t>(i)]));
        for (Index i = 0; i < nq; ++i) g[i] *= q.weights[static_cast<std::size_t>(i)];
        sys.rhs.segment(face.element * p, p) += theta * (trace.adjoint() * g);
    }
    return sys;
}

DenseReference dense_reference(const CaseConfig& config)
{
    const OracleProblem op(config);
    DenseReference ref;
    const QuadratureSystem qs = quadrature_system(*op.mesh, *op.basis, op.data);
    ref.A = qs.matrix;
    ref.b = qs.rhs;
    ref.sparse_vs_dense = relative_difference(CMatrix(op.system->matrix), ref.A);

    const BddcOptions options = bddc_options(config);
    const BddcLevel level(op.level(config), options);
    const GlobPartition& part = level.partition();
    const IndexList iface = part.interface_dofs();
    IndexList interior;
    for (const auto& v : part.subdomain_interior) interior.insert(interior.end(), v.begin(), v.end());
    std::sort(interior.begin(), interior.end());

    const CMatrix Agg = extract(ref.A, iface, iface);
    const CMatrix Aig = extract(ref.A, interior, iface);
    Eigen::LLT<CMatrix> lii(extract(ref.A, interior, interior));
    if (lii.info() != Eigen::Success) throw SingularInterior(-1, "dense interior block is not positive definite");
    ref.schur = hermitian_part(Agg - Aig.adjoint() * lii.solve(Aig));

    const Index ni = level.schur().size();
    CMatrix S_op(ni, ni);
    for (Index j = 0; j < ni; ++j) S_op.col(j) = level.schur().apply(CVector::Unit(ni, j));
    ref.schur_vs_operator = relative_difference(S_op, ref.schur);

    ref.preconditioner = level.dense_preconditioner();
    ref.preconditioner_hermitian_defect = relative_difference(ref.preconditioner.adjoint(), ref.preconditioner);
    Eigen::LLT<CMatrix> ls(ref.schur);
    if (ls.info() != Eigen::Success) throw Error("dense Schur complement is not positive definite");
    const CMatrix L = ls.matrixL();
    ref.spectrum = hermitian_eigen(hermitian_part(L.adjoint() * hermitian_part(ref.preconditioner) * L)).values;

    ref.direct_solution = ref.A.lu().solve(ref.b);
    PcgOptions po;
    po.rtol = config.rtol;
    po.maxit = config.maxit;
    po.flexible = config.flexible;
    SolveResult sr = full_solve(op.level(config), op.system->rhs, options, po);
    ref.bddc_solution = std::move(sr.u);
    ref.report = std::move(sr.report);
    return ref;
}

double filter_bound_check(const GlobData& glob, int samples, unsigned seed)
{
    const GlobEigenSplit& sp = glob.split;
    if (sp.n_dual() == 0) return 0.0;
    if (glob.S.size() != glob.subdomains.size() || glob.Sbar.size() != glob.subdomains.size())
        throw Error("filter_bound_check needs the glob's S and Sbar blocks");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    const std::size_t nn = glob.subdomains.size();
    for (int it = 0; it < samples; ++it) {
        const CVector x = sp.T_dual * random_vector(sp.n_dual(), rng);
        const CVector y = x + sp.T_primal * random_vector(sp.n_primal(), rng);
        for (std::size_t r = 0; r < nn; ++r) {
            double left = 0.0;
            for (std::size_t s = 0; s < nn; ++s) {
                if (s == r) continue;
                const CVector ds = glob.D[s] * x;
                const CVector dr = glob.D[r] * x;
                left += std::real(ds.dot(glob.S[r] * ds)) + std::real(dr.dot(glob.S[s] * dr));
            }
            const double right = std::real(y.dot(glob.Sbar[r] * y));
            if (right > 0.0) worst = std::max(worst, left / right);
            else if (left > 0.0) worst = std::numeric_limits<double>::infinity();
        }
    }
    return worst;
}

std::vector<CheckResult> invariant_suite(const CaseConfig& config, const InvariantOptions& options)
{
    const OracleProblem op(config);
    std::vector<CheckResult> out;
    std::mt19937_64 rng(options.seed);
    const SparseMatrix& A = op.system->matrix;

    {
        const CMatrix Ad(A);
        out.push_back(check("global matrix Hermitian (exact)", (Ad - Ad.adjoint()).cwiseAbs().maxCoeff(), 0.0));
        out.push_back(check("global matrix positive definite (-min eig / max eig)",
                            [&] { const auto ev = hermitian_eigen(Ad).values; return -ev.minCoeff() / ev.maxCoeff(); }(), 0.0));
    }

    {
        const auto forms = assemble_subdomain_forms(*op.form);
        double psd = 0.0;
        for (const auto& f : forms) {
            const auto ev = hermitian_eigen(hermitian_part(f.matrix)).values;
            psd = std::max(psd, -ev.minCoeff() / ev.maxCoeff());
        }
        out.push_back(check("local forms positive semi-definite (-min/max eig)", psd, 1e-10));
        double tiling = 0.0;
        for (int it = 0; it < 100; ++it) {
            const CVector u = random_vector(A.rows(), rng);
            const CVector v = random_vector(A.rows(), rng);
            const Complex global = v.dot(A * u);
            Complex sum{0.0, 0.0};
            for (const auto& f : forms) sum += local_form_value(f, u, v);
            const double scale = std::sqrt(std::real(u.dot(A * u)) * std::real(v.dot(A * v)));
            tiling = std::max(tiling, std::abs(global - sum) / scale);
        }
        out.push_back(check("a = sum a_r tiling", tiling, 1e-10));
    }

    BddcOptions bo = bddc_options(config);
    bo.keep_glob_blocks = true;
    const BddcLevel level(op.level(config), bo);
    const auto& globs = level.globs();

    double pou = 0.0;
    double sbar_le_s = 0.0;
    double par = 0.0;
    double gevp = 0.0;
    double borth = 0.0;
    double filter = 0.0;
    for (std::size_t g = 0; g < globs.size(); ++g) {
        const GlobData& gd = globs[g];
        if (gd.kind == GlobKind::Interior) continue;
        const Index n = static_cast<Index>(gd.interface_pos.size());
        CMatrix sum = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < gd.D.size(); ++k) sum += (k == 0 ? options.scaling_fault : 1.0) * gd.D[k];
        pou = std::max(pou, (sum - CMatrix::Identity(n, n)).norm() / std::sqrt(static_cast<double>(n)));
        if (gd.kind == GlobKind::Vertex) continue;

        for (std::size_t k = 0; k < gd.S.size(); ++k) {
            const double sn = spectral_norm(gd.S[k]);
            for (int it = 0; it < 50; ++it) {
                const CVector x = random_vector(n, rng);
                const double diff = std::real(x.dot(gd.Sbar[k] * x)) - std::real(x.dot(gd.S[k] * x));
                sbar_le_s = std::max(sbar_le_s, diff / (sn * x.squaredNorm()));
            }
        }

        const CMatrix B = parallel_sum(gd.Sbar);
        double smax = 0.0;
        for (const auto& s : gd.Sbar) smax = std::max(smax, spectral_norm(s));
        for (int it = 0; it < options.samples; ++it) {
            const CVector x = random_vector(n, rng);
            double qmin = std::numeric_limits<double>::infinity();
            for (const auto& s : gd.Sbar) qmin = std::min(qmin, std::real(x.dot(s * x)));
            par = std::max(par, (std::real(x.dot(B * x)) - qmin) / (smax * x.squaredNorm()));
        }

        const Gevp pencil = build_gevp(gd.S, gd.Sbar, gd.D);
        const double an = spectral_norm(pencil.A);
        const double bn = spectral_norm(pencil.B);
        auto residual = [&](const CMatrix& V, const std::vector<double>& lambda) {
            for (Index j = 0; j < V.cols(); ++j) {
                const double l = lambda[static_cast<std::size_t>(j)];
                if (!std::isfinite(l)) continue;
                const CVector v = V.col(j);
                const double res = (pencil.A * v - l * (pencil.B * v)).norm() / ((an + std::abs(l) * bn) * v.norm());
                gevp = std::max(gevp, res);
            }
        };
        residual(gd.split.T_dual, gd.split.dual_values);
        residual(gd.split.T_primal, gd.split.primal_values);
        if (gd.split.n_dual() > 0 && gd.split.n_primal() > 0)
            borth = std::max(borth, (gd.split.T_primal.adjoint() * pencil.B * gd.split.T_dual).norm() /
                                        (bn * gd.split.T_primal.norm() * gd.split.T_dual.norm()));
        const double theta = gd.kind == GlobKind::Face ? bo.theta_face : bo.theta_edge;
        filter = std::max(filter, filter_bound_check(gd, options.samples, options.seed + static_cast<unsigned>(g)) / theta);
    }
    out.push_back(check("scaling partition of identity", pou, 1e-12));
    out.push_back(check("Sbar <= S in quadratic form", sbar_le_s, 1e-10));
    out.push_back(check("parallel sum dominated by each Sbar", par, 1e-9));
    out.push_back(check("GEVP residual", gevp, 1e-8));
    out.push_back(check("B-orthogonality of dual and primal blocks", borth, 1e-8));
    out.push_back(check("filter bound ratio / theta", filter, 1.0 + 1e-6));

    double idem = 0.0;
    double pd = 0.0;
    for (int it = 0; it < options.samples; ++it) {
        const PartialVector w = random_partial_vector(level, options.seed * 1000u + static_cast<unsigned>(it));
        const PartialVector e1 = inject(level, average(level, w));
        const PartialVector e2 = inject(level, average(level, e1));
        const auto c1 = local_values(level, e1);
        const auto c2 = local_values(level, e2);
        const auto c = local_values(level, w);
        const CVector u = average(level, w);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t g = 0; g < globs.size(); ++g) {
            const GlobData& gd = globs[g];
            if (gd.kind == GlobKind::Interior) continue;
            const CVector ux = extract(u, gd.interface_pos);
            for (std::size_t r = 0; r < gd.subdomains.size(); ++r) {
                num += (c2[g][r] - c1[g][r]).squaredNorm();
                den += c1[g][r].squaredNorm();
                const CVector route1 = c[g][r] - ux;
                CVector route2 = CVector::Zero(route1.size());
                for (std::size_t s = 0; s < gd.subdomains.size(); ++s)
                    if (s != r) route2 += gd.D[s] * (gd.split.T_dual * (w.dual[g][r] - w.dual[g][s]));
                pd = std::max(pd, (route1 - route2).norm() / std::max(c[g][r].norm(), 1e-300));
            }
        }
        idem = std::max(idem, std::sqrt(num / std::max(den, 1e-300)));
    }
    out.push_back(check("E_D idempotency", idem, 1e-10));
    out.push_back(check("P_D explicit two-sum expression", pd, 1e-9));

    const DenseReference ref = dense_reference(config);
    out.push_back(check("dense vs closed-form assembly", ref.sparse_vs_dense, 1e-10));
    out.push_back(check("Schur operator vs dense elimination", ref.schur_vs_operator, 1e-9));
    out.push_back(check("preconditioner Hermitian", ref.preconditioner_hermitian_defect, 1e-9));
    out.push_back(check("1 - lambda_min(M^-1 S)", 1.0 - ref.spectrum.minCoeff(), 1e-8));
    return out;
}

} // namespace pwbddc
