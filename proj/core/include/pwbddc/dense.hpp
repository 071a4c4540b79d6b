#pragma once

#include "pwbddc/types.hpp"

#include <Eigen/Cholesky>

#include <optional>

namespace pwbddc {

CMatrix hermitian_part(const CMatrix& A);

CMatrix extract(const CMatrix& A, const IndexList& rows, const IndexList& cols);
CVector extract(const CVector& x, const IndexList& rows);
CMatrix columns(const CMatrix& A, const IndexList& cols);

// Cholesky factor with a relative pivot floor: every pivot must exceed floor * max|diag(A)|.
class HermitianFactor {
public:
    HermitianFactor() = default;

    static std::optional<HermitianFactor> try_factor(const CMatrix& A, double pivot_floor = 1e-12);

    Index size() const { return size_; }
    template <typename Rhs>
    CMatrix solve(const Eigen::MatrixBase<Rhs>& b) const
    {
        if (size_ == 0) return CMatrix(0, b.cols());
        return llt_.solve(b);
    }
    CVector solve(const CVector& b) const
    {
        if (size_ == 0) return CVector(0);
        return llt_.solve(b);
    }
    // L^{-1} B with A = L L^H
    CMatrix solve_lower(const CMatrix& B) const;
    double min_pivot_ratio() const { return min_pivot_ratio_; }

private:
    Eigen::LLT<CMatrix> llt_;
    Index size_ = 0;
    double min_pivot_ratio_ = 1.0;
};

// A_kk - A_ke A_ee^{-1} A_ek; returns nullopt when A_ee violates the pivot floor.
std::optional<CMatrix> schur_complement(const CMatrix& A, const IndexList& keep, const IndexList& eliminate,
                                        double pivot_floor = 1e-12);

// Hermitian eigen-decomposition, ascending eigenvalues.
struct HermitianEigen {
    RVector values;
    CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& A);

// Relative Frobenius distance ||A - B|| / max(||B||, tiny).
double relative_difference(const CMatrix& A, const CMatrix& B);

} // namespace pwbddc
