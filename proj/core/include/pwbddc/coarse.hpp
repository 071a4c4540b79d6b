#pragma once

#include "pwbddc/globs.hpp"
#include "pwbddc/schur.hpp"

namespace pwbddc {

enum class ScalingKind { Deluxe, Multiplicity };

const char* to_string(ScalingKind kind);
ScalingKind parse_scaling(const std::string& text);

// Deluxe weights D^(v) = (sum_u S^(u))^{-1} S^(v); the last one is I - sum of the others so the
// family sums to the identity exactly. Throws SingularDeluxeSum when the sum is not PD.
std::vector<CMatrix> scaling_matrices(const std::vector<CMatrix>& S, ScalingKind kind);

// A (A + B)^+ B, Hermitian part, pseudo-inverse cutoff relative to the largest eigenvalue of A + B.
CMatrix parallel_sum(const CMatrix& A, const CMatrix& B, double cutoff = 1e-10);
// Folded left to right.
CMatrix parallel_sum(const std::vector<CMatrix>& mats, double cutoff = 1e-10);

struct Gevp {
    CMatrix A; // A^D
    CMatrix B; // parallel sum of the Sbar blocks
};

// A^D = sum_v sum_{u != v} D^(u)^H S^(v) D^(u).
Gevp build_gevp(const std::vector<CMatrix>& S, const std::vector<CMatrix>& Sbar, const std::vector<CMatrix>& D);

struct GlobEigenSplit {
    // eigenvalues in column order of [T_dual, T_primal]; +inf marks directions outside B's range
    std::vector<double> dual_values;
    std::vector<double> primal_values;
    CMatrix T_dual;
    CMatrix T_primal;

    Index n_dual() const { return T_dual.cols(); }
    Index n_primal() const { return T_primal.cols(); }
    Index size() const { return n_dual() + n_primal(); }
    CMatrix T() const;
};

struct SplitOptions {
    double null_cutoff = 1e-10;
    // |lambda| <= theta (1 + slack) counts as dual
    double slack = 1e-12;
};

GlobEigenSplit solve_gevp_and_split(const CMatrix& A, const CMatrix& B, double theta, const SplitOptions& options = {});

// Vertex globs and anything the caller wants fully primal.
GlobEigenSplit all_primal(Index size);
GlobEigenSplit all_dual(Index size);

struct CoarseCounts {
    Index pnum = 0;
    Index pnumF = 0;
    Index pnumE = 0;
    Index pnumV = 0;
};

struct CoarseSpace {
    CoarseCounts counts;
    IndexList primal_offset; // per glob, start of its primal coordinates in the coarse numbering
    IndexList primal_size;   // per glob
};

CoarseSpace build_coarse_space(const GlobPartition& partition, const std::vector<GlobEigenSplit>& splits);

} // namespace pwbddc
