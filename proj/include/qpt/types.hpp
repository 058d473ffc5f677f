#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpt {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes, so new failure kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not fit together (vector lengths, generator counts, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input that violates a documented precondition or invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The computation is well posed only under an assumption the input breaks
// numerically (zero fiducial, degenerate level, ...).
class NumericalRefusal : public Error {
 public:
  using Error::Error;
};

class ZeroFiducialError : public NumericalRefusal {
 public:
  using NumericalRefusal::NumericalRefusal;
};

class DegenerateLevelError : public NumericalRefusal {
 public:
  DegenerateLevelError(const std::string& what, double gap)
      : NumericalRefusal(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

inline void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace qpt
