#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace qmc_test {

using qmc::Complex;
using qmc::Matrix;

std::vector<double> jacobi_eigenvalues(const Matrix& hermitian, double tol, int max_sweeps) {
  const int n = static_cast<int>(hermitian.rows());
  Matrix a = 0.5 * (hermitian + hermitian.adjoint().eval());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) < tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const Complex phase = a(p, q) / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Phase-rotate the pair so the coupling is real, then apply the
        // classic real rotation that zeroes it.
        const double tau = (app - aqq) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns: u_p' = c u_p + s conj(phase) u_q ; u_q' = -s phase u_p + c u_q
        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(phase) * akq;
          a(k, q) = -s * phase * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + s * phase * aqk;
          a(q, k) = -s * std::conj(phase) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = a(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double direct_frobenius(const Matrix& m) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) sum += std::norm(m(r, c));
  return std::sqrt(sum);
}

Complex direct_trace(const Matrix& m) {
  Complex sum(0, 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) sum += m(i, i);
  return sum;
}

Matrix choi_apply(const Matrix& choi, const Matrix& rho, int dim_in, int dim_out) {
  Matrix out = Matrix::Zero(dim_out, dim_out);
  for (int i = 0; i < dim_in; ++i)
    for (int j = 0; j < dim_in; ++j)
      out += rho(i, j) * choi.block(i * dim_out, j * dim_out, dim_out, dim_out);
  return out;
}

}  // namespace qmc_test
