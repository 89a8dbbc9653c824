// Shared scalar/matrix aliases, tolerances, dimensions and the error
// hierarchy used by every module in the library.
#ifndef QMC_TYPES_HPP
#define QMC_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qmc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

enum class ErrorCode {
  dimension_mismatch,
  validation,
  numeric,
  parse,
  argument,
  unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message)
      : Error(ErrorCode::dimension_mismatch, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::validation, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error(ErrorCode::numeric, message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string path)
      : Error(ErrorCode::parse, path.empty() ? message : message + " (at " + path + ")"),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error(ErrorCode::argument, message) {}
};

// Numerical tolerance carried through validations and comparisons.
class Tolerance {
 public:
  Tolerance(double eps = kDefaultTol) : eps_(eps) {  // NOLINT(runtime/explicit)
    if (!(eps >= 0.0)) throw ArgumentError("tolerance must be non-negative");
  }

  double eps() const noexcept { return eps_; }

 private:
  double eps_;
};

// Dimensions of the two factors of a bipartite space.
struct DimPair {
  int n1;
  int n2;

  DimPair(int first, int second) : n1(first), n2(second) {
    if (n1 < 1 || n2 < 1) throw ArgumentError("factor dimensions must be >= 1");
  }

  int total() const noexcept { return n1 * n2; }
};

// Which tensor factor an operation refers to.
enum class Factor { first = 1, second = 2 };

}  // namespace qmc

#endif  // QMC_TYPES_HPP
