#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwbddc {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
using IndexList = std::vector<Index>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NoValidFactorization : public Error {
public:
    using Error::Error;
};

class SingularInterior : public Error {
public:
    SingularInterior(Index subdomain, const std::string& what)
        : Error(what), subdomain_(subdomain) {}
    Index subdomain() const noexcept { return subdomain_; }

private:
    Index subdomain_;
};

class SingularEliminationBlock : public Error {
public:
    SingularEliminationBlock(Index glob, Index subdomain, const std::string& what)
        : Error(what), glob_(glob), subdomain_(subdomain) {}
    Index glob() const noexcept { return glob_; }
    Index subdomain() const noexcept { return subdomain_; }

private:
    Index glob_;
    Index subdomain_;
};

class SingularDeluxeSum : public Error {
public:
    using Error::Error;
};

class EigenSolverFailure : public Error {
public:
    using Error::Error;
};

class NonHermitianDetected : public Error {
public:
    using Error::Error;
};

class SizeCapExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

} // namespace pwbddc
