#pragma once

#include "pwbddc/dense.hpp"
#include "pwbddc/globs.hpp"

#include <memory>

namespace pwbddc {

// Interior solves for every subdomain, taken from the interior blocks of the global matrix.
class InteriorFactorization {
public:
    InteriorFactorization(const SparseMatrix& A, const GlobPartition& partition, double pivot_floor = 1e-12);

    Index subdomain_count() const { return static_cast<Index>(factors_.size()); }
    const HermitianFactor& factor(Index r) const { return factors_[r]; }
    const IndexList& interior(Index r) const { return (*interiors_)[r]; }

private:
    const std::vector<IndexList>* interiors_;
    std::vector<HermitianFactor> factors_;
};

// Matrix-free interface Schur complement A_GG - A_GI A_II^{-1} A_IG.
class SchurOperator {
public:
    SchurOperator(std::shared_ptr<const SparseMatrix> A, const GlobPartition& partition, double pivot_floor = 1e-12);

    Index size() const { return static_cast<Index>(interface_.size()); }
    const IndexList& interface_dofs() const { return interface_; }
    const SparseMatrix& matrix() const { return *A_; }
    const InteriorFactorization& interior() const { return interior_; }

    CVector apply(const CVector& x) const;
    // b_G - A_GI A_II^{-1} b_I
    CVector condense_rhs(const CVector& b) const;
    // full vector from the interface solution by interior back-substitution
    CVector extend(const CVector& b, const CVector& x_interface) const;
    CMatrix dense() const;

private:
    CVector interior_solve_update(const CVector& full_rhs_interior, Index r) const;

    std::shared_ptr<const SparseMatrix> A_;
    IndexList interface_;
    IndexList interface_pos_; // dof -> interface position or -1
    InteriorFactorization interior_;
    SparseMatrix A_gg_;
    std::vector<SparseMatrix> A_ig_; // interior rows of r, interface columns
};

// Schur complement of one dense local form onto its interface dofs.
class LocalSchur {
public:
    // interior / interface are positions in the local matrix.
    LocalSchur(const CMatrix& A, const IndexList& interior, const IndexList& interface, Index subdomain,
               double pivot_floor = 1e-12);

    const CMatrix& S() const { return S_; }
    // glob block S_XX; positions refer to the interface ordering.
    CMatrix glob_S(const IndexList& glob) const;
    // S_XX - S_XO S_OO^{-1} S_OX with O the remaining interface positions.
    CMatrix glob_Sbar(const IndexList& glob, Index glob_id) const;

private:
    CMatrix S_;
    Index subdomain_;
    double pivot_floor_;
};

struct GlobSchurBlocks {
    IndexList subdomains; // N_X, ascending
    std::vector<CMatrix> S;
    std::vector<CMatrix> Sbar;
};

} // namespace pwbddc
