#pragma once

#include "pwbddc/case.hpp"

namespace pwbddc {

constexpr Index oracle_dof_cap = 4000;

// Global matrix and right-hand side by tensor Gauss-Legendre quadrature of the face integrands.
struct QuadratureSystem {
    CMatrix matrix;
    CVector rhs;
};
QuadratureSystem quadrature_system(const Mesh& mesh, const WaveBasis& basis, const BoundaryData& data, int order = 20);

struct DenseReference {
    CMatrix A;           // quadrature route
    CVector b;           // quadrature route
    CMatrix schur;       // dense block elimination
    CMatrix preconditioner;
    RVector spectrum;    // eigenvalues of M^{-1} S, ascending
    CVector direct_solution;
    CVector bddc_solution;
    SolveReport report;
    double sparse_vs_dense = 0.0; // relative difference of the two assembly routes
    double schur_vs_operator = 0.0;
    double preconditioner_hermitian_defect = 0.0;
};

DenseReference dense_reference(const CaseConfig& config);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct InvariantOptions {
    unsigned seed = 7;
    int samples = 20;
    // multiplies the first scaling matrix of every glob; 1 leaves them intact
    double scaling_fault = 1.0;
};

// Ratio of the two sides of the filter inequality, maximised over sampled dual vectors and
// subdomains of the glob. Needs the glob's S and Sbar blocks.
double filter_bound_check(const GlobData& glob, int samples, unsigned seed);

std::vector<CheckResult> invariant_suite(const CaseConfig& config, const InvariantOptions& options = {});

} // namespace pwbddc
