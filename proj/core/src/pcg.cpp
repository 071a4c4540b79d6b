#include "pwbddc/pcg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace pwbddc {

std::pair<double, double> lanczos_extremes(const std::vector<double>& alpha, const std::vector<double>& beta)
{
    const Index k = static_cast<Index>(alpha.size());
    if (k == 0) return {1.0, 1.0};
    RVector diag(k);
    RVector off(std::max<Index>(k - 1, 0));
    for (Index j = 0; j < k; ++j) {
        diag[j] = 1.0 / alpha[j];
        if (j > 0) diag[j] += beta[j - 1] / alpha[j - 1];
        if (j + 1 < k) off[j] = std::sqrt(beta[j]) / alpha[j];
    }
    if (k == 1) return {diag[0], diag[0]};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

PcgResult pcg(const LinearOperator& A, const LinearOperator& M, const CVector& b, const PcgOptions& options)
{
    PcgResult res;
    res.x = CVector::Zero(b.size());
    const double bnorm = b.norm();
    res.residual_history.push_back(1.0);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    CVector r = b;
    CVector z = M(r);
    CVector p = z;
    double rz = std::real(r.dot(z));
    std::vector<double> alphas;
    std::vector<double> betas;
    while (res.iterations < options.maxit) {
        const CVector q = A(p);
        const Complex pq = p.dot(q);
        if (std::abs(pq.imag()) > options.hermitian_tol * std::abs(pq))
            throw NonHermitianDetected("p^H S p has relative imaginary part " +
                                       std::to_string(std::abs(pq.imag()) / std::abs(pq)));
        const double alpha = rz / pq.real();
        res.x.noalias() += alpha * p;
        CVector r_old;
        if (options.flexible) r_old = r;
        r.noalias() -= alpha * q;
        ++res.iterations;
        alphas.push_back(alpha);
        const double rel = r.norm() / bnorm;
        res.residual_history.push_back(rel);
        if (rel <= options.rtol) {
            res.converged = true;
            break;
        }
        z = M(r);
        const double rz_new = std::real(r.dot(z));
        const double beta = options.flexible ? std::real(z.dot(r - r_old)) / rz : rz_new / rz;
        betas.push_back(beta);
        rz = rz_new;
        p = z + beta * p;
    }
    std::tie(res.lambda_min, res.lambda_max) = lanczos_extremes(alphas, betas);
    return res;
}

} // namespace pwbddc
