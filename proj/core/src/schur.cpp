#include "pwbddc/schur.hpp"

#include <algorithm>
#include <string>

namespace pwbddc {

namespace {

// Columns cols of A restricted to the rows flagged in row_pos (row -> new index or -1).
SparseMatrix sparse_block(const SparseMatrix& A, const IndexList& row_pos, Index nrows, const IndexList& cols)
{
    std::vector<Eigen::Triplet<Complex, int>> trip;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (SparseMatrix::InnerIterator it(A, cols[j]); it; ++it) {
            const Index r = row_pos[it.row()];
            if (r >= 0) trip.emplace_back(static_cast<int>(r), static_cast<int>(j), it.value());
        }
    SparseMatrix out(nrows, static_cast<Index>(cols.size()));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

CMatrix dense_block(const SparseMatrix& A, const IndexList& rows, const IndexList& cols)
{
    IndexList pos(static_cast<std::size_t>(A.rows()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<Index>(i);
    CMatrix out = CMatrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (SparseMatrix::InnerIterator it(A, cols[j]); it; ++it)
            if (pos[it.row()] >= 0) out(pos[it.row()], static_cast<Index>(j)) = it.value();
    return out;
}

} // namespace

InteriorFactorization::InteriorFactorization(const SparseMatrix& A, const GlobPartition& partition, double pivot_floor)
    : interiors_(&partition.subdomain_interior)
{
    factors_.resize(partition.subdomain_interior.size());
    for (std::size_t r = 0; r < factors_.size(); ++r) {
        const IndexList& in = partition.subdomain_interior[r];
        auto f = HermitianFactor::try_factor(dense_block(A, in, in), pivot_floor);
        if (!f)
            throw SingularInterior(static_cast<Index>(r), "interior block of subdomain " + std::to_string(r) +
                                                              " violates the pivot floor");
        factors_[r] = std::move(*f);
    }
}

SchurOperator::SchurOperator(std::shared_ptr<const SparseMatrix> A, const GlobPartition& partition, double pivot_floor)
    : A_(std::move(A)), interface_(partition.interface_dofs()), interior_(*A_, partition, pivot_floor)
{
    const Index n = A_->rows();
    interface_pos_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < interface_.size(); ++i) interface_pos_[interface_[i]] = static_cast<Index>(i);
    A_gg_ = sparse_block(*A_, interface_pos_, size(), interface_);
    A_ig_.resize(static_cast<std::size_t>(interior_.subdomain_count()));
    IndexList pos(static_cast<std::size_t>(n), -1);
    for (Index r = 0; r < interior_.subdomain_count(); ++r) {
        const IndexList& in = interior_.interior(r);
        for (std::size_t i = 0; i < in.size(); ++i) pos[in[i]] = static_cast<Index>(i);
        A_ig_[r] = sparse_block(*A_, pos, static_cast<Index>(in.size()), interface_);
        for (Index d : in) pos[d] = -1;
    }
}

CVector SchurOperator::apply(const CVector& x) const
{
    if (x.size() != size()) throw DimensionMismatch("Schur apply: vector of size " + std::to_string(x.size()) +
                                                    ", expected " + std::to_string(size()));
    CVector y = A_gg_ * x;
    for (Index r = 0; r < interior_.subdomain_count(); ++r) {
        if (A_ig_[r].rows() == 0) continue;
        const CVector t = interior_.factor(r).solve(CVector(A_ig_[r] * x));
        y.noalias() -= A_ig_[r].adjoint() * t;
    }
    return y;
}

CVector SchurOperator::condense_rhs(const CVector& b) const
{
    if (b.size() != A_->rows()) throw DimensionMismatch("condense_rhs: wrong vector size");
    CVector g = extract(b, interface_);
    for (Index r = 0; r < interior_.subdomain_count(); ++r) {
        if (A_ig_[r].rows() == 0) continue;
        const CVector t = interior_.factor(r).solve(extract(b, interior_.interior(r)));
        g.noalias() -= A_ig_[r].adjoint() * t;
    }
    return g;
}

CVector SchurOperator::extend(const CVector& b, const CVector& x_interface) const
{
    if (b.size() != A_->rows() || x_interface.size() != size()) throw DimensionMismatch("extend: wrong vector size");
    CVector u = CVector::Zero(A_->rows());
    for (std::size_t i = 0; i < interface_.size(); ++i) u[interface_[i]] = x_interface[static_cast<Index>(i)];
    for (Index r = 0; r < interior_.subdomain_count(); ++r) {
        const IndexList& in = interior_.interior(r);
        if (in.empty()) continue;
        const CVector rhs = extract(b, in) - A_ig_[r] * x_interface;
        const CVector ui = interior_.factor(r).solve(rhs);
        for (std::size_t i = 0; i < in.size(); ++i) u[in[i]] = ui[static_cast<Index>(i)];
    }
    return u;
}

CMatrix SchurOperator::dense() const
{
    CMatrix S = CMatrix(A_gg_);
    for (Index r = 0; r < interior_.subdomain_count(); ++r) {
        if (A_ig_[r].rows() == 0) continue;
        const CMatrix Aig = CMatrix(A_ig_[r]);
        const CMatrix Y = interior_.factor(r).solve_lower(Aig);
        S.noalias() -= Y.adjoint() * Y;
    }
    return hermitian_part(S);
}

LocalSchur::LocalSchur(const CMatrix& A, const IndexList& interior, const IndexList& interface, Index subdomain,
                       double pivot_floor)
    : subdomain_(subdomain), pivot_floor_(pivot_floor)
{
    auto S = schur_complement(A, interface, interior, pivot_floor);
    if (!S)
        throw SingularInterior(subdomain, "interior block of local form " + std::to_string(subdomain) +
                                              " violates the pivot floor");
    S_ = std::move(*S);
}

CMatrix LocalSchur::glob_S(const IndexList& glob) const { return extract(S_, glob, glob); }

CMatrix LocalSchur::glob_Sbar(const IndexList& glob, Index glob_id) const
{
    std::vector<char> in_glob(static_cast<std::size_t>(S_.rows()), 0);
    for (Index i : glob) in_glob[i] = 1;
    IndexList other;
    for (Index i = 0; i < S_.rows(); ++i)
        if (!in_glob[i]) other.push_back(i);
    auto Sbar = schur_complement(S_, glob, other, pivot_floor_);
    if (!Sbar)
        throw SingularEliminationBlock(glob_id, subdomain_,
                                       "elimination block for glob " + std::to_string(glob_id) + " in subdomain " +
                                           std::to_string(subdomain_) + " violates the pivot floor");
    return std::move(*Sbar);
}

} // namespace pwbddc
