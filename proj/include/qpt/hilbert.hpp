#pragma once

// Finite-dimensional Hilbert-space substrate: the Hermitian inner product and
// the flat Hermitian tensor together with its ray-space (Fubini-Study) form.
//
// The orthonormal frame {e_j} is fixed once; tangent vectors at a point psi
// are plain vectors of the same space. The complex structure J acts as
// multiplication by i and is never stored as a matrix.

#include <cmath>

#include "qpt/types.hpp"

namespace qpt {

// Default slack for the hermiticity/unitarity predicates: 1e-10 per unit of
// dimension.
inline double default_matrix_tolerance(Index dim) { return 1e-10 * static_cast<double>(dim); }

// A tensor evaluated on a pair of tangent vectors. The real part is the
// metric contribution, the imaginary part the 2-form contribution.
struct TensorValue {
  Complex value;

  double real_part() const { return value.real(); }
  double imag_part() const { return value.imag(); }
};

// <phi|psi>, conjugate-linear in phi.
inline Complex inner(const ComplexVector& phi, const ComplexVector& psi) {
  require_same_dim(phi.size(), psi.size(), "inner");
  return phi.dot(psi);  // Eigen conjugates the left operand
}

inline double norm_squared(const ComplexVector& psi) { return psi.squaredNorm(); }

inline ComplexVector apply_complex_structure(const ComplexVector& v) { return kI * v; }

inline TensorValue hermitian_tensor_at(const ComplexVector& psi, const ComplexVector& u,
                                       const ComplexVector& v) {
  require_same_dim(psi.size(), u.size(), "hermitian_tensor_at");
  require_same_dim(psi.size(), v.size(), "hermitian_tensor_at");
  return {inner(u, v)};
}

// <u|v>/<psi|psi> - <psi|v><u|psi>/<psi|psi>^2
inline TensorValue projective_tensor_at(const ComplexVector& psi, const ComplexVector& u,
                                        const ComplexVector& v) {
  require_same_dim(psi.size(), u.size(), "projective_tensor_at");
  require_same_dim(psi.size(), v.size(), "projective_tensor_at");
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0)) throw ZeroFiducialError("projective_tensor_at: zero fiducial vector");
  return {inner(u, v) / n2 - inner(psi, v) * inner(u, psi) / (n2 * n2)};
}

inline ComplexVector normalized(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ZeroFiducialError("zero fiducial vector");
  return psi / n;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && (a.size() == 0 || hermiticity_defect(a) <= tol);
}
inline bool is_hermitian(const ComplexMatrix& a) { return is_hermitian(a, default_matrix_tolerance(a.rows())); }

inline bool is_skew_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && (a.size() == 0 || (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol);
}
inline bool is_skew_hermitian(const ComplexMatrix& a) {
  return is_skew_hermitian(a, default_matrix_tolerance(a.rows()));
}

inline double unitarity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("unitarity_defect: matrix is not square");
  return (a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
}

inline bool is_unitary(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && (a.size() == 0 || unitarity_defect(a) <= tol);
}
inline bool is_unitary(const ComplexMatrix& a) { return is_unitary(a, default_matrix_tolerance(a.rows())); }

}  // namespace qpt
