#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <stdexcept>
#include <string>

namespace specloc {

using cplx = std::complex<double>;
using Index = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, Index>;
using RSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;

/// Base class for numerical failures that are not caller precondition errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operator (or a matrix) is not invertible at the working tolerance.
class NotInvertibleError : public Error {
 public:
  using Error::Error;
};

/// A localizer produced an odd signature, which the index identity forbids.
class OddSignatureError : public Error {
 public:
  using Error::Error;
};

/// An iterative or grid-refined computation did not reach its target accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Spectral (operator 2-) norm of a small dense matrix.
double operator_norm(const CMatrix& m);
double operator_norm(const RMatrix& m);

/// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);
RMatrix kron(const RMatrix& a, const RMatrix& b);

}  // namespace specloc
