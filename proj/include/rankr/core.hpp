#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rankr {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidInput,
  InvalidRank,
  RankDeficientProjection,
  IllConditionedTriangular,
  InnerIterationFailure,
  AmbiguousRank,
  InvalidBasis,
  NumericBreakdown,
  LayoutMismatch,
  Parse,
  VariableMismatch,
  NothingToDeflate,
  UnknownSystem,
  InsufficientSteps,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Failure inside an iterative driver; carries the step (Newton) or level
// (deflation) at which the underlying error surfaced.
class IterationError : public Error {
 public:
  IterationError(ErrorKind kind, const std::string& what, std::size_t index)
      : Error(kind, what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Platform-independent stream: raw 64-bit words come from mt19937_64, the
// mapping to doubles is done here so results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  Scalar unit_disk();                   // uniform in the closed unit disk
  Vector random_vector(std::size_t n, bool complex_entries);
  Matrix gaussian_matrix(std::size_t rows, std::size_t cols, bool complex_entries);

 private:
  std::mt19937_64 engine_;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

double inf_norm(const Matrix& a);

}  // namespace rankr
