#pragma once

#include "pwbddc/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace testing_support {

using pwbddc::CMatrix;
using pwbddc::CVector;
using pwbddc::Complex;
using pwbddc::Index;

inline CVector random_vector(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CVector v(n);
    for (Index i = 0; i < n; ++i) v[i] = Complex(nd(rng), nd(rng));
    return v;
}

inline CMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng)
{
    CMatrix A(rows, cols);
    for (Index j = 0; j < cols; ++j) A.col(j) = random_vector(rows, rng);
    return A;
}

// G G^H with G of the given rank
inline CMatrix random_psd(Index n, Index rank, std::mt19937_64& rng)
{
    const CMatrix G = random_matrix(n, rank, rng);
    CMatrix A = G * G.adjoint();
    return 0.5 * (A + A.adjoint());
}

// Golub-Welsch nodes and weights on [-1, 1]
inline void golub_welsch(int order, std::vector<double>& x, std::vector<double>& w)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(order);
    w.resize(order);
    for (int i = 0; i < order; ++i) {
        x[i] = es.eigenvalues()[i];
        w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
}

} // namespace testing_support
