#include "pwbddc/dense.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pwbddc {

CMatrix hermitian_part(const CMatrix& A) { return 0.5 * (A + A.adjoint()); }

CMatrix extract(const CMatrix& A, const IndexList& rows, const IndexList& cols)
{
    CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Index>(i), static_cast<Index>(j)) = A(rows[i], cols[j]);
    return out;
}

CVector extract(const CVector& x, const IndexList& rows)
{
    CVector out(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = x[rows[i]];
    return out;
}

CMatrix columns(const CMatrix& A, const IndexList& cols)
{
    CMatrix out(A.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = A.col(cols[j]);
    return out;
}

std::optional<HermitianFactor> HermitianFactor::try_factor(const CMatrix& A, double pivot_floor)
{
    HermitianFactor f;
    f.size_ = A.rows();
    if (f.size_ == 0) return f;
    const double dmax = A.diagonal().cwiseAbs().maxCoeff();
    if (!(dmax > 0.0)) return std::nullopt;
    f.llt_.compute(A);
    if (f.llt_.info() != Eigen::Success) return std::nullopt;
    const auto d = f.llt_.matrixLLT().diagonal().real();
    const double ratio = (d.array() * d.array()).minCoeff() / dmax;
    if (!(ratio > pivot_floor)) return std::nullopt;
    f.min_pivot_ratio_ = ratio;
    return f;
}

CMatrix HermitianFactor::solve_lower(const CMatrix& B) const
{
    if (size_ == 0) return CMatrix(0, B.cols());
    return llt_.matrixL().solve(B);
}

std::optional<CMatrix> schur_complement(const CMatrix& A, const IndexList& keep, const IndexList& eliminate, double pivot_floor)
{
    CMatrix S = extract(A, keep, keep);
    if (eliminate.empty()) return hermitian_part(S);
    auto f = HermitianFactor::try_factor(extract(A, eliminate, eliminate), pivot_floor);
    if (!f) return std::nullopt;
    const CMatrix Y = f->solve_lower(extract(A, eliminate, keep));
    S.noalias() -= Y.adjoint() * Y;
    return hermitian_part(S);
}

HermitianEigen hermitian_eigen(const CMatrix& A)
{
    HermitianEigen out;
    if (A.rows() == 0) {
        out.values.resize(0);
        out.vectors.resize(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
    if (es.info() != Eigen::Success) throw EigenSolverFailure("Hermitian eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
}

double relative_difference(const CMatrix& A, const CMatrix& B)
{
    const double nb = std::max(B.norm(), 1e-300);
    return (A - B).norm() / nb;
}

} // namespace pwbddc
