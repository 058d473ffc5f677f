#pragma once

// Dense Hermitian eigensystems and functions of Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpt/hilbert.hpp"

namespace qpt {

struct Eigensystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // column k belongs to values[k]
};

// Rotates v so that its first component with modulus above `threshold`
// (relative to the largest component) is real and positive.
inline void fix_phase(Eigen::Ref<ComplexVector> v, double threshold = 1e-10) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > threshold * scale) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

// Ascending eigenvalues; each eigenvector phase-fixed as in fix_phase so that
// level tracking is reproducible across calls.
inline Eigensystem hermitian_eigensystem(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw DimensionError("hermitian_eigensystem: matrix must be square and non-empty");
  }
  if (!is_hermitian(h)) {
    throw InvalidArgument("hermitian_eigensystem: matrix is not Hermitian (defect " +
                          std::to_string(hermiticity_defect(h)) + ")");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalRefusal("hermitian_eigensystem: eigensolver did not converge");
  }
  Eigensystem es{solver.eigenvalues(), solver.eigenvectors()};
  for (Index k = 0; k < es.vectors.cols(); ++k) fix_phase(es.vectors.col(k));
  return es;
}

inline Eigensystem real_symmetric_eigensystem(const RealMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError("real_symmetric_eigensystem: matrix must be square and non-empty");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (a + a.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericalRefusal("real_symmetric_eigensystem: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors().cast<Complex>()};
}

// exp(i t H) for Hermitian H, unitary up to rounding.
inline ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t = 1.0) {
  const Eigensystem es = hermitian_eigensystem(h);
  ComplexVector phases(es.values.size());
  for (Index k = 0; k < phases.size(); ++k) {
    const double theta = t * es.values[k];
    if (!std::isfinite(theta)) throw NumericalRefusal("exp_i_hermitian: non-finite exponent");
    phases[k] = std::polar(1.0, theta);
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

inline double spectral_radius(const RealVector& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

// Real symmetric matrix: smallest eigenvalue.
inline double min_eigenvalue(const RealMatrix& a) {
  return real_symmetric_eigensystem(a).values.minCoeff();
}

inline Index numerical_rank(const RealMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix> svd(a);
  const RealVector s = svd.singularValues();
  return static_cast<Index>(std::count_if(s.data(), s.data() + s.size(), [&](double x) { return x > tol; }));
}

// Kronecker product of a list of factors, left factor slowest.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix kron(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

}  // namespace qpt
