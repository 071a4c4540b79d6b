#include "pwbddc/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pwbddc {

const char* to_string(ScalingKind kind) { return kind == ScalingKind::Deluxe ? "deluxe" : "multiplicity"; }

ScalingKind parse_scaling(const std::string& text)
{
    if (text == "deluxe" || text == "M1") return ScalingKind::Deluxe;
    if (text == "multiplicity" || text == "M2") return ScalingKind::Multiplicity;
    throw ConfigError("unknown scaling '" + text + "' (expected deluxe or multiplicity)");
}

std::vector<CMatrix> scaling_matrices(const std::vector<CMatrix>& S, ScalingKind kind)
{
    if (S.empty()) return {};
    const Index n = S.front().rows();
    for (const auto& s : S)
        if (s.rows() != n || s.cols() != n) throw DimensionMismatch("scaling_matrices: blocks differ in size");
    std::vector<CMatrix> D(S.size());
    if (kind == ScalingKind::Multiplicity) {
        for (auto& d : D) d = CMatrix::Identity(n, n) / static_cast<double>(S.size());
        return D;
    }
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& s : S) sum += s;
    auto f = HermitianFactor::try_factor(hermitian_part(sum), 1e-14);
    if (!f) throw SingularDeluxeSum("sum of glob Schur blocks is not positive definite");
    CMatrix rest = CMatrix::Identity(n, n);
    for (std::size_t v = 0; v + 1 < S.size(); ++v) {
        D[v] = f->solve(S[v]);
        rest -= D[v];
    }
    D.back() = rest;
    return D;
}

CMatrix parallel_sum(const CMatrix& A, const CMatrix& B, double cutoff)
{
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw DimensionMismatch("parallel_sum: size mismatch");
    const Index n = A.rows();
    if (n == 0) return CMatrix(0, 0);
    const auto eig = hermitian_eigen(hermitian_part(A + B));
    const double top = eig.values.cwiseAbs().maxCoeff();
    if (!(top > 0.0)) return CMatrix::Zero(n, n);
    RVector inv = RVector::Zero(n);
    for (Index i = 0; i < n; ++i)
        if (eig.values[i] > cutoff * top) inv[i] = 1.0 / eig.values[i];
    const CMatrix W = eig.vectors.adjoint() * B;
    const CMatrix AV = A * eig.vectors;
    return hermitian_part(AV * inv.asDiagonal() * W);
}

CMatrix parallel_sum(const std::vector<CMatrix>& mats, double cutoff)
{
    if (mats.empty()) throw DimensionMismatch("parallel_sum: empty list");
    CMatrix acc = hermitian_part(mats.front());
    for (std::size_t i = 1; i < mats.size(); ++i) acc = parallel_sum(acc, mats[i], cutoff);
    return acc;
}

Gevp build_gevp(const std::vector<CMatrix>& S, const std::vector<CMatrix>& Sbar, const std::vector<CMatrix>& D)
{
    if (S.size() != Sbar.size() || S.size() != D.size() || S.empty())
        throw DimensionMismatch("build_gevp: block lists differ in length");
    const Index n = S.front().rows();
    Gevp g;
    g.A = CMatrix::Zero(n, n);
    for (std::size_t v = 0; v < S.size(); ++v)
        for (std::size_t u = 0; u < S.size(); ++u)
            if (u != v) g.A.noalias() += D[u].adjoint() * S[v] * D[u];
    g.A = hermitian_part(g.A);
    g.B = parallel_sum(Sbar);
    return g;
}

CMatrix GlobEigenSplit::T() const
{
    CMatrix t(T_dual.rows() > 0 ? T_dual.rows() : T_primal.rows(), size());
    t << T_dual, T_primal;
    return t;
}

GlobEigenSplit all_primal(Index size)
{
    GlobEigenSplit s;
    s.T_dual.resize(size, 0);
    s.T_primal = CMatrix::Identity(size, size);
    s.primal_values.assign(static_cast<std::size_t>(size), std::numeric_limits<double>::infinity());
    return s;
}

GlobEigenSplit all_dual(Index size)
{
    GlobEigenSplit s;
    s.T_dual = CMatrix::Identity(size, size);
    s.T_primal.resize(size, 0);
    s.dual_values.assign(static_cast<std::size_t>(size), 0.0);
    return s;
}

GlobEigenSplit solve_gevp_and_split(const CMatrix& Ain, const CMatrix& Bin, double theta, const SplitOptions& options)
{
    if (Ain.rows() != Bin.rows() || Ain.rows() != Ain.cols() || Bin.rows() != Bin.cols())
        throw DimensionMismatch("solve_gevp_and_split: size mismatch");
    const Index n = Ain.rows();
    GlobEigenSplit out;
    out.T_dual.resize(n, 0);
    out.T_primal.resize(n, 0);
    if (n == 0) return out;
    const CMatrix A = hermitian_part(Ain);
    const CMatrix B = hermitian_part(Bin);
    const double inf = std::numeric_limits<double>::infinity();

    const auto eb = hermitian_eigen(B);
    const double bmax = std::max(eb.values.cwiseAbs().maxCoeff(), 0.0);
    IndexList range;
    IndexList null;
    for (Index i = 0; i < n; ++i) (bmax > 0.0 && eb.values[i] > options.null_cutoff * bmax ? range : null).push_back(i);

    const CMatrix R = columns(eb.vectors, range);
    CMatrix Zp(n, 0);
    CMatrix Z0(n, 0);
    RVector zp_energy;
    if (!null.empty()) {
        const CMatrix Z = columns(eb.vectors, null);
        const auto ez = hermitian_eigen(hermitian_part(Z.adjoint() * A * Z));
        const double amax = A.norm();
        IndexList energetic;
        IndexList silent;
        for (Index i = 0; i < ez.values.size(); ++i)
            (ez.values[i] > options.null_cutoff * amax && amax > 0.0 ? energetic : silent).push_back(i);
        Zp = Z * columns(ez.vectors, energetic);
        Z0 = Z * columns(ez.vectors, silent);
    }

    // Reduced pencil on range(B) with the energetic null directions eliminated.
    CMatrix V(n, 0);
    RVector lambda(0);
    if (!range.empty()) {
        RVector mu(static_cast<Index>(range.size()));
        for (std::size_t i = 0; i < range.size(); ++i) mu[static_cast<Index>(i)] = eb.values[range[i]];
        CMatrix Aeff = R.adjoint() * A * R;
        CMatrix coupling; // A_pp^{-1} A_pR
        if (Zp.cols() > 0) {
            const CMatrix App = hermitian_part(Zp.adjoint() * A * Zp);
            const CMatrix ApR = Zp.adjoint() * A * R;
            Eigen::LDLT<CMatrix> ldlt(App);
            coupling = ldlt.solve(ApR);
            Aeff.noalias() -= ApR.adjoint() * coupling;
        }
        const RVector s = mu.cwiseSqrt().cwiseInverse();
        const CMatrix C = hermitian_part(s.asDiagonal() * Aeff * s.asDiagonal());
        const auto ec = hermitian_eigen(C);
        const CMatrix a = s.asDiagonal() * ec.vectors;
        V = R * a;
        if (Zp.cols() > 0) V.noalias() -= Zp * (coupling * a);
        lambda = ec.values;
    }

    IndexList order(static_cast<std::size_t>(lambda.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(lambda[a]) < std::abs(lambda[b]); });
    IndexList dual;
    IndexList primal;
    for (Index i : order) (std::abs(lambda[i]) <= theta * (1.0 + options.slack) ? dual : primal).push_back(i);

    out.T_dual.resize(n, Z0.cols() + static_cast<Index>(dual.size()));
    out.T_dual << Z0, columns(V, dual);
    out.T_primal.resize(n, static_cast<Index>(primal.size()) + Zp.cols());
    out.T_primal << columns(V, primal), Zp;
    // primal directions only define a span; unit columns keep the coarse matrix well scaled
    for (Index j = 0; j < out.T_primal.cols(); ++j) out.T_primal.col(j).normalize();
    out.dual_values.assign(static_cast<std::size_t>(Z0.cols()), 0.0);
    for (Index i : dual) out.dual_values.push_back(lambda[i]);
    for (Index i : primal) out.primal_values.push_back(lambda[i]);
    out.primal_values.insert(out.primal_values.end(), static_cast<std::size_t>(Zp.cols()), inf);
    return out;
}

CoarseSpace build_coarse_space(const GlobPartition& partition, const std::vector<GlobEigenSplit>& splits)
{
    if (splits.size() != partition.globs.size()) throw DimensionMismatch("build_coarse_space: one split per glob expected");
    CoarseSpace cs;
    cs.primal_offset.assign(splits.size(), 0);
    cs.primal_size.assign(splits.size(), 0);
    Index offset = 0;
    for (std::size_t g = 0; g < splits.size(); ++g) {
        const GlobKind kind = partition.globs[g].kind;
        const Index np = kind == GlobKind::Interior ? 0 : splits[g].n_primal();
        cs.primal_offset[g] = offset;
        cs.primal_size[g] = np;
        offset += np;
        if (kind == GlobKind::Face) cs.counts.pnumF += np;
        if (kind == GlobKind::Edge) cs.counts.pnumE += np;
        if (kind == GlobKind::Vertex) cs.counts.pnumV += np;
    }
    cs.counts.pnum = offset;
    return cs;
}

} // namespace pwbddc
