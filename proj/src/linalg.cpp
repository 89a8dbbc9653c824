#include "qmc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmc {

namespace {

void require_square(const Matrix& M, const char* what) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << what << ": matrix must be square, got " << M.rows() << "x" << M.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const Matrix& A, const Matrix& B, const char* what) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch (" << A.rows() << "x" << A.cols() << " vs "
       << B.rows() << "x" << B.cols() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

double frobenius_distance(const Matrix& A, const Matrix& B) {
  require_same_shape(A, B, "frobenius_distance");
  return (A - B).norm();
}

bool approx_eq(const Matrix& A, const Matrix& B, Tolerance tol) {
  require_same_shape(A, B, "approx_eq");
  const double dim = static_cast<double>(std::max(A.rows(), A.cols()));
  return (A - B).norm() <= tol.eps() * std::sqrt(dim);
}

bool is_hermitian(const Matrix& M, Tolerance tol) {
  if (M.rows() != M.cols()) return false;
  const double dim = static_cast<double>(M.rows());
  return (M - M.adjoint()).norm() <= tol.eps() * std::sqrt(dim);
}

Matrix ensure_hermitian(const Matrix& M, Tolerance tol) {
  require_square(M, "ensure_hermitian");
  const double residual = (M - M.adjoint()).norm();
  const double dim = static_cast<double>(M.rows());
  if (residual > tol.eps() * std::sqrt(dim)) {
    std::ostringstream os;
    os << "matrix is not Hermitian: anti-Hermitian residual " << residual;
    throw ValidationError(os.str());
  }
  return 0.5 * (M + M.adjoint().eval());
}

RealVector hermitian_eigenvalues(const Matrix& M, Tolerance tol) {
  const Matrix H = ensure_hermitian(M, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue computation failed to converge");
  }
  return solver.eigenvalues();
}

bool is_psd(const Matrix& M, Tolerance tol) {
  require_square(M, "is_psd");
  if (!is_hermitian(M, tol)) return false;
  const RealVector eigs = hermitian_eigenvalues(M, tol);
  return eigs.minCoeff() >= -tol.eps();
}

Matrix principal_sqrt(const Matrix& M, Tolerance tol) {
  const Matrix H = ensure_hermitian(M, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue computation failed to converge");
  }
  RealVector eigs = solver.eigenvalues();
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs[i] < -tol.eps()) {
      std::ostringstream os;
      os << "principal_sqrt: matrix is not PSD, eigenvalue " << eigs[i];
      throw ValidationError(os.str());
    }
    // The whole [-eps, eps] band is treated as zero: square roots amplify
    // eigenvalue noise from eps to sqrt(eps), which would dominate the
    // result on rank-deficient input. R*R still reproduces M within
    // eps * dim.
    if (eigs[i] <= tol.eps()) eigs[i] = 0.0;
  }
  const RealVector roots = eigs.cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix tensor(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

Matrix tensor(const Matrix& A, const Matrix& B, const Matrix& C) {
  return tensor(tensor(A, B), C);
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix partial_trace(const Matrix& M, DimPair dims, Factor traced) {
  require_square(M, "partial_trace");
  if (M.rows() != dims.total()) {
    std::ostringstream os;
    os << "partial_trace: matrix dimension " << M.rows() << " != " << dims.n1
       << "*" << dims.n2;
    throw DimensionError(os.str());
  }
  const int n1 = dims.n1;
  const int n2 = dims.n2;
  if (traced == Factor::second) {
    Matrix out = Matrix::Zero(n1, n1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) out(i, j) += M(i * n2 + k, j * n2 + k);
    return out;
  }
  Matrix out = Matrix::Zero(n2, n2);
  for (int k = 0; k < n2; ++k)
    for (int l = 0; l < n2; ++l)
      for (int i = 0; i < n1; ++i) out(k, l) += M(i * n2 + k, i * n2 + l);
  return out;
}

Matrix partial_trace_factor(const Matrix& M, const std::vector<int>& dims, int traced) {
  require_square(M, "partial_trace_factor");
  if (traced < 0 || traced >= static_cast<int>(dims.size())) {
    throw ArgumentError("partial_trace_factor: factor index out of range");
  }
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw ArgumentError("partial_trace_factor: dimensions must be >= 1");
    total *= d;
  }
  if (M.rows() != total) {
    throw DimensionError("partial_trace_factor: matrix dimension does not match factors");
  }
  // Collapse to (left, traced, right) and trace the middle block index.
  long left = 1, right = 1;
  for (int f = 0; f < traced; ++f) left *= dims[f];
  for (int f = traced + 1; f < static_cast<int>(dims.size()); ++f) right *= dims[f];
  const long mid = dims[traced];
  Matrix out = Matrix::Zero(left * right, left * right);
  for (long a = 0; a < left; ++a)
    for (long b = 0; b < left; ++b)
      for (long r = 0; r < right; ++r)
        for (long s = 0; s < right; ++s) {
          Complex acc(0.0, 0.0);
          for (long m = 0; m < mid; ++m) {
            acc += M((a * mid + m) * right + r, (b * mid + m) * right + s);
          }
          out(a * right + r, b * right + s) = acc;
        }
  return out;
}

SchmidtDecomposition schmidt(const Vector& psi, DimPair dims, Tolerance tol) {
  if (psi.size() != dims.total()) {
    std::ostringstream os;
    os << "schmidt: vector length " << psi.size() << " != " << dims.n1 << "*" << dims.n2;
    throw DimensionError(os.str());
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol.eps() * 10.0) {
    std::ostringstream os;
    os << "schmidt: vector norm " << norm << " is not 1";
    throw ValidationError(os.str());
  }
  Matrix reshaped(dims.n1, dims.n2);
  for (int i = 0; i < dims.n1; ++i)
    for (int j = 0; j < dims.n2; ++j) reshaped(i, j) = psi[i * dims.n2 + j];

  Eigen::JacobiSVD<Matrix> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();  // descending by construction
  const int rank = static_cast<int>(out.coefficients.size());
  out.left.reserve(rank);
  out.right.reserve(rank);
  for (int k = 0; k < rank; ++k) {
    out.left.push_back(svd.matrixU().col(k));
    out.right.push_back(svd.matrixV().col(k).conjugate());
  }
  return out;
}

}  // namespace qmc
