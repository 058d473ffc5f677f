#pragma once

// Pull-back of the Hermitian tensor (or its projective form) along the orbit
// map g -> U(g)|0>.
//
// Coefficients T_jk = <0|R_j R_k|0> - [projective] <0|R_j|0><0|R_k|0> are
// taken on the normalized fiducial; the coordinate tensor is T_jk theta_j (x) theta_k
// with no extra factor. Its real part is the metric, its imaginary part the
// 2-form.

#include <vector>

#include "qpt/liegroup.hpp"

namespace qpt {

enum class FrameTag { left_invariant_at_fiducial, right_invariant_at_point };

struct PullbackTensor {
  ComplexMatrix coefficients;
  bool projective = false;
  FrameTag frame = FrameTag::left_invariant_at_fiducial;
  ComplexVector fiducial;  // normalized

  Index size() const { return coefficients.rows(); }
};

struct CoordinateTensor {
  RealVector point;
  RealMatrix metric;
  RealMatrix two_form;
};

struct TensorSplit {
  RealMatrix metric;
  RealMatrix form;
};

// <psi|R_j|psi> for normalized psi.
inline RealVector expectations(const LieAlgebraRep& rep, const ComplexVector& psi) {
  RealVector e(rep.size());
  for (Index j = 0; j < rep.size(); ++j) e[j] = inner(psi, rep.generator(j) * psi).real();
  return e;
}

inline PullbackTensor covariance_matrix(const LieAlgebraRep& rep, const ComplexVector& fiducial, bool projective) {
  require_same_dim(fiducial.size(), rep.dim(), "covariance_matrix");
  const ComplexVector psi = normalized(fiducial);
  const Index n = rep.size();
  ComplexMatrix images(rep.dim(), n);  // column k = R_k psi
  for (Index k = 0; k < n; ++k) images.col(k) = rep.generator(k) * psi;
  ComplexMatrix t = images.adjoint() * images;
  if (projective) {
    const RealVector e = expectations(rep, psi);
    t -= (e * e.transpose()).cast<Complex>();
  }
  // Exact Hermitian form; the products above agree with it to rounding.
  t = 0.5 * (t + t.adjoint()).eval();
  return {t, projective, FrameTag::left_invariant_at_fiducial, psi};
}

// Coefficients at the displaced state U(g)|0>, i.e. in the right-invariant
// frame at g.
inline PullbackTensor covariance_matrix_at(const LieAlgebraRep& rep, const ComplexVector& fiducial,
                                           const GroupPoint& g, bool projective) {
  PullbackTensor t = covariance_matrix(rep, group_element(rep, g) * fiducial, projective);
  t.frame = FrameTag::right_invariant_at_point;
  return t;
}

inline TensorSplit split(const PullbackTensor& t, double tol = 1e-10) {
  if (t.coefficients.rows() != t.coefficients.cols()) throw DimensionError("split: coefficients not square");
  if (!is_hermitian(t.coefficients, tol)) {
    throw InvalidArgument("split: coefficient matrix is not Hermitian (defect " +
                          std::to_string(hermiticity_defect(t.coefficients)) + ")");
  }
  return {t.coefficients.real(), t.coefficients.imag()};
}

// max_jk |2 Im T_jk - (c_r^{jk} <R_r> + w_jk)|: the antisymmetric part must
// be the expectation of the commutator relation.
inline double multiplier_consistency(const LieAlgebraRep& rep, const ComplexVector& fiducial) {
  const PullbackTensor t = covariance_matrix(rep, fiducial, false);
  const RealVector e = expectations(rep, t.fiducial);
  const auto& c = rep.structure_constants();
  double worst = 0.0;
  for (Index j = 0; j < rep.size(); ++j) {
    for (Index k = 0; k < rep.size(); ++k) {
      double expected = rep.omega(j, k);
      for (Index r = 0; r < rep.size(); ++r) expected += c(r, j, k) * e[r];
      worst = std::max(worst, std::abs(2.0 * t.coefficients(j, k).imag() - expected));
    }
  }
  return worst;
}

inline constexpr double kDefaultNullTolerance = 1e-8;

// Null directions of the projective metric coefficients; `tol` is the
// absolute eigenvalue cutoff. Each direction u satisfies
// |(u.R - <u.R>)|0>|^2 = u^T Re(T) u <= tol.
inline std::vector<RealVector> degeneracy_directions(const LieAlgebraRep& rep, const ComplexVector& fiducial,
                                                     double tol = kDefaultNullTolerance) {
  const PullbackTensor t = covariance_matrix(rep, fiducial, true);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(t.coefficients.real());
  std::vector<RealVector> out;
  for (Index k = 0; k < solver.eigenvalues().size(); ++k) {
    if (std::abs(solver.eigenvalues()[k]) > tol) continue;
    RealVector u = solver.eigenvectors().col(k);
    Index big = 0;
    u.cwiseAbs().maxCoeff(&big);
    if (u[big] < 0.0) u = -u;
    out.push_back(u);
  }
  return out;
}

// G = theta^T Re(T) theta, W = theta^T Im(T) theta.
inline CoordinateTensor evaluate_at(const PullbackTensor& t, const Coframe& coframe) {
  require_same_dim(coframe.theta.rows(), t.size(), "evaluate_at");
  const RealMatrix& th = coframe.theta;
  RealMatrix g = th.transpose() * t.coefficients.real() * th;
  RealMatrix w = th.transpose() * t.coefficients.imag() * th;
  g = 0.5 * (g + g.transpose()).eval();
  w = 0.5 * (w - w.transpose()).eval();
  return {coframe.point, g, w};
}

inline ComplexVector orbit_state(const LieAlgebraRep& rep, const ComplexVector& fiducial, const GroupPoint& g) {
  require_same_dim(fiducial.size(), rep.dim(), "orbit_state");
  return group_element(rep, g) * fiducial;
}

// Largest |(dW)_abc| = |d_a W_bc + d_b W_ca + d_c W_ab| at x, by central
// differences of the 2-form field.
template <class TwoFormField>
double exterior_derivative_residual(const TwoFormField& field, const RealVector& x, double step) {
  const Index m = x.size();
  std::vector<RealMatrix> dw;
  for (Index a = 0; a < m; ++a) {
    RealVector xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    dw.push_back((field(xp) - field(xm)) / (2.0 * step));
  }
  double worst = 0.0;
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b)
      for (Index c = b + 1; c < m; ++c) {
        const double v = dw[static_cast<std::size_t>(a)](b, c) + dw[static_cast<std::size_t>(b)](c, a) +
                         dw[static_cast<std::size_t>(c)](a, b);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

// Closedness of the coordinate 2-form of `t` on `chart` at x.
inline double two_form_closedness(const PullbackTensor& t, const Chart& chart, const RealVector& x, double step) {
  return exterior_derivative_residual([&](const RealVector& y) { return evaluate_at(t, chart.coframe(y)).two_form; },
                                      x, step);
}

}  // namespace qpt
