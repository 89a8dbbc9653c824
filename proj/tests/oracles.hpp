// Test-only reference computations, deliberately independent of the library
// implementation paths they cross-check.
#ifndef QMC_TESTS_ORACLES_HPP
#define QMC_TESTS_ORACLES_HPP

#include <vector>

#include "qmc/types.hpp"

namespace qmc_test {

// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
// ascending. Shares no code with the Eigen-based solvers in the library.
std::vector<double> jacobi_eigenvalues(const qmc::Matrix& hermitian, double tol = 1e-13,
                                       int max_sweeps = 60);

// Frobenius norm by plain summation.
double direct_frobenius(const qmc::Matrix& m);

// Trace by plain summation.
qmc::Complex direct_trace(const qmc::Matrix& m);

// Applies a map through its Choi matrix: tr_in[C (rho^T (x) 1_out)].
qmc::Matrix choi_apply(const qmc::Matrix& choi, const qmc::Matrix& rho, int dim_in,
                       int dim_out);

}  // namespace qmc_test

#endif  // QMC_TESTS_ORACLES_HPP
