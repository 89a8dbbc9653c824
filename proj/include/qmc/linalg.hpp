// Dense complex-matrix substrate: Hermitian/PSD checks, principal square
// roots, Kronecker products, partial traces, Schmidt decomposition and
// tolerance-based comparison. Everything downstream builds on these.
#ifndef QMC_LINALG_HPP
#define QMC_LINALG_HPP

#include <vector>

#include "qmc/types.hpp"

namespace qmc {

// Frobenius norm of A - B scaled test: true iff ||A - B||_F <= eps * sqrt(dim)
// where dim = max(rows, cols). Throws on shape mismatch.
bool approx_eq(const Matrix& A, const Matrix& B, Tolerance tol = {});

double frobenius_distance(const Matrix& A, const Matrix& B);

// Hermitian part (M + M^dagger)/2. Throws if the anti-Hermitian residual
// exceeds eps * sqrt(n); small skew is treated as float noise.
Matrix ensure_hermitian(const Matrix& M, Tolerance tol = {});

bool is_hermitian(const Matrix& M, Tolerance tol = {});

// Ascending eigenvalues of a Hermitian matrix (symmetrized first).
RealVector hermitian_eigenvalues(const Matrix& M, Tolerance tol = {});

// True iff M is Hermitian within tol and its minimum eigenvalue is >= -eps.
bool is_psd(const Matrix& M, Tolerance tol = {});

// Principal square root of a PSD matrix. Eigenvalues in [-eps, 0) are
// clamped to zero; anything below -eps is an error.
Matrix principal_sqrt(const Matrix& M, Tolerance tol = {});

// Kronecker product.
Matrix tensor(const Matrix& A, const Matrix& B);
Matrix tensor(const Matrix& A, const Matrix& B, const Matrix& C);
Vector tensor(const Vector& a, const Vector& b);

Matrix identity(int n);

// Partial trace over one factor of a bipartite space. Tracing the second
// factor yields an n1 x n1 matrix, tracing the first an n2 x n2 one.
Matrix partial_trace(const Matrix& M, DimPair dims, Factor traced);

// Partial trace over the factor at `traced` (0-based) of a multipartite
// space with the given factor dimensions.
Matrix partial_trace_factor(const Matrix& M, const std::vector<int>& dims, int traced);

struct SchmidtDecomposition {
  RealVector coefficients;        // descending, sum of squares = 1
  std::vector<Vector> left;       // orthonormal vectors on factor 1
  std::vector<Vector> right;      // orthonormal vectors on factor 2
};

// Schmidt decomposition of a unit vector on an n1 x n2 product space,
// computed from the SVD of its n1 x n2 reshaping.
SchmidtDecomposition schmidt(const Vector& psi, DimPair dims, Tolerance tol = {});

}  // namespace qmc

#endif  // QMC_LINALG_HPP
