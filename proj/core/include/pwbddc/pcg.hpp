#pragma once

#include "pwbddc/types.hpp"

#include <functional>

namespace pwbddc {

using LinearOperator = std::function<CVector(const CVector&)>;

struct PcgOptions {
    double rtol = 1e-5;
    int maxit = 100;
    // Polak-Ribiere style beta, for preconditioners that vary between applications.
    bool flexible = false;
    double hermitian_tol = 1e-8;
};

struct PcgResult {
    CVector x;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history; // ||r_k|| / ||b||, starting with 1
    double lambda_min = 1.0;
    double lambda_max = 1.0;

    double cond() const { return lambda_max / lambda_min; }
};

// Extreme eigenvalues of the Lanczos tridiagonal built from CG step lengths alpha_k and beta_k.
std::pair<double, double> lanczos_extremes(const std::vector<double>& alpha, const std::vector<double>& beta);

PcgResult pcg(const LinearOperator& A, const LinearOperator& M, const CVector& b, const PcgOptions& options = {});

} // namespace pwbddc
