#include "pwbddc/pcg.hpp"

#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

using namespace pwbddc;
using testing_support::random_psd;
using testing_support::random_vector;

namespace {

LinearOperator matrix_op(const CMatrix& A)
{
    return [A](const CVector& x) { return CVector(A * x); };
}

const LinearOperator identity = [](const CVector& x) { return x; };

} // namespace

TEST(Pcg, OneByOne)
{
    CMatrix A(1, 1);
    A(0, 0) = 4.0;
    CVector b(1);
    b[0] = Complex(2.0, 1.0);
    const PcgResult r = pcg(matrix_op(A), identity, b);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_NEAR(std::abs(r.x[0] - b[0] / 4.0), 0.0, 1e-15);
}

TEST(Pcg, LanczosEstimatesOnDiagonal)
{
    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 2.0;
    CVector b(2);
    b << Complex(1.0, 0.0), Complex(1.0, 0.0);
    PcgOptions o;
    o.rtol = 1e-14;
    const PcgResult r = pcg(matrix_op(A), identity, b, o);
    EXPECT_EQ(r.iterations, 2);
    EXPECT_NEAR(r.lambda_min, 1.0, 1e-10);
    EXPECT_NEAR(r.lambda_max, 2.0, 1e-10);
    EXPECT_NEAR(r.cond(), 2.0, 1e-10);
}

TEST(Pcg, LanczosTridiagonalMatchesDenseEigenvalues)
{
    const std::vector<double> alpha{0.5, 0.25, 0.4};
    const std::vector<double> beta{0.3, 0.2};
    // T_kk = 1/a_k + b_{k-1}/a_{k-1}, T_{k,k+1} = sqrt(b_k)/a_k
    Eigen::Matrix3d T = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k) {
        T(k, k) = 1.0 / alpha[k] + (k > 0 ? beta[k - 1] / alpha[k - 1] : 0.0);
        if (k < 2) T(k, k + 1) = T(k + 1, k) = std::sqrt(beta[k]) / alpha[k];
    }
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(T).eigenvalues();
    const auto [lo, hi] = lanczos_extremes(alpha, beta);
    EXPECT_NEAR(lo, ev[0], 1e-12);
    EXPECT_NEAR(hi, ev[2], 1e-12);
}

TEST(Pcg, PreconditionedRandomHpd)
{
    std::mt19937_64 rng(31);
    const CMatrix A = random_psd(60, 80, rng) + CMatrix::Identity(60, 60);
    const CMatrix M = A.diagonal().cwiseInverse().asDiagonal();
    const CVector b = random_vector(60, rng);
    PcgOptions o;
    o.rtol = 1e-10;
    o.maxit = 500;
    const PcgResult r = pcg(matrix_op(A), matrix_op(M), b, o);
    EXPECT_TRUE(r.converged);
    EXPECT_LE((A * r.x - b).norm() / b.norm(), 1e-10);
    EXPECT_NEAR(r.residual_history.front(), 1.0, 0.0);
    EXPECT_EQ(static_cast<int>(r.residual_history.size()), r.iterations + 1);
    o.flexible = true;
    const PcgResult f = pcg(matrix_op(A), matrix_op(M), b, o);
    EXPECT_TRUE(f.converged);
    EXPECT_LE((f.x - r.x).norm() / r.x.norm(), 1e-8);
}

TEST(Pcg, NonConvergenceIsReportedNotThrown)
{
    std::mt19937_64 rng(32);
    const CMatrix A = random_psd(50, 50, rng) + 1e-3 * CMatrix::Identity(50, 50);
    PcgOptions o;
    o.rtol = 1e-14;
    o.maxit = 3;
    const PcgResult r = pcg(matrix_op(A), identity, random_vector(50, rng), o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3);
}

TEST(Pcg, NonHermitianOperatorIsDetected)
{
    CMatrix A = CMatrix::Identity(3, 3);
    A(0, 1) = Complex(0.0, 5.0);
    CVector b = CVector::Ones(3);
    EXPECT_THROW(pcg(matrix_op(A), identity, b), NonHermitianDetected);
}

TEST(Pcg, ZeroRightHandSide)
{
    const PcgResult r = pcg(identity, identity, CVector::Zero(4));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0);
}
