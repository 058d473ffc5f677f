#pragma once

// Weyl systems on truncated Fock space.
//
// Generators are ordered (Q^1..Q^n, P^1..P^n) with [Q^j, P^k] = i delta_jk and
// w = [[0, I], [-I, 0]]. The displacement W(v) = exp(i v.R) then obeys
// W(v1) W(v2) = exp(-i w(v1, v2)) W(v2) W(v1) in infinite dimension; on the
// truncated space the relation holds up to a defect that vanishes as the
// cutoff grows.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qpt/pullback.hpp"

namespace qpt {

class WeylSystem {
 public:
  WeylSystem(Index modes, Index cutoff) : modes_(modes), cutoff_(cutoff), rep_(heisenberg_rep(modes, cutoff)) {
    vacuum_ = ComplexVector::Zero(rep_.dim());
    vacuum_[0] = 1.0;
  }

  Index modes() const { return modes_; }
  Index cutoff() const { return cutoff_; }
  Index dim() const { return rep_.dim(); }
  const LieAlgebraRep& rep() const { return rep_; }
  const ComplexMatrix& position(Index j) const { return rep_.generator(j); }
  const ComplexMatrix& momentum(Index j) const { return rep_.generator(modes_ + j); }
  const RealMatrix& symplectic_form() const { return *rep_.multiplier_form(); }
  const ComplexVector& vacuum() const { return vacuum_; }

  double omega(const RealVector& v1, const RealVector& v2) const {
    require_same_dim(v1.size(), 2 * modes_, "WeylSystem::omega");
    require_same_dim(v2.size(), 2 * modes_, "WeylSystem::omega");
    return v1.dot(symplectic_form() * v2);
  }

 private:
  Index modes_;
  Index cutoff_;
  LieAlgebraRep rep_;
  ComplexVector vacuum_;
};

inline WeylSystem build_weyl(Index modes, Index cutoff) { return WeylSystem(modes, cutoff); }

inline ComplexMatrix displacement(const WeylSystem& w, const RealVector& v) {
  require_same_dim(v.size(), 2 * w.modes(), "displacement");
  if (!v.allFinite()) throw InvalidArgument("displacement: non-finite displacement vector");
  return exp_i_hermitian(w.rep().combination(v));
}

// |(W(v1) W(v2) - exp(-i w(v1,v2)) W(v2) W(v1)) |0>|
inline double weyl_relation_defect(const WeylSystem& w, const RealVector& v1, const RealVector& v2) {
  const ComplexMatrix d1 = displacement(w, v1);
  const ComplexMatrix d2 = displacement(w, v2);
  const Complex phase = std::polar(1.0, -w.omega(v1, v2));
  const ComplexVector& vac = w.vacuum();
  return (d1 * (d2 * vac) - phase * (d2 * (d1 * vac))).norm();
}

inline PullbackTensor gaussian_covariance(const WeylSystem& w, bool projective) {
  return covariance_matrix(w.rep(), w.vacuum(), projective);
}

class NotLagrangianError : public InvalidArgument {
 public:
  NotLagrangianError(const std::string& what, Index first, Index second)
      : InvalidArgument(what), first_(first), second_(second) {}
  Index first() const noexcept { return first_; }
  Index second() const noexcept { return second_; }

 private:
  Index first_;
  Index second_;
};

// Restricts T to span{directions}: T' = S^T T S with S's columns the
// directions. The span must be Lagrangian for `symplectic` (isotropic and of
// half dimension).
inline PullbackTensor lagrangian_restriction(const PullbackTensor& t, const std::vector<RealVector>& directions,
                                             const RealMatrix& symplectic, double tol = 1e-12) {
  const Index n2 = symplectic.rows();
  require_same_dim(t.size(), n2, "lagrangian_restriction");
  if (static_cast<Index>(directions.size()) * 2 != n2) {
    throw InvalidArgument("lagrangian_restriction: a Lagrangian subspace needs " + std::to_string(n2 / 2) +
                          " directions, got " + std::to_string(directions.size()));
  }
  RealMatrix s(n2, static_cast<Index>(directions.size()));
  for (std::size_t c = 0; c < directions.size(); ++c) {
    require_same_dim(directions[c].size(), n2, "lagrangian_restriction");
    s.col(static_cast<Index>(c)) = directions[c];
  }
  if (numerical_rank(s, 1e-12) != s.cols()) {
    throw InvalidArgument("lagrangian_restriction: directions are linearly dependent");
  }
  const RealMatrix w = s.transpose() * symplectic * s;
  for (Index a = 0; a < w.rows(); ++a)
    for (Index b = a + 1; b < w.cols(); ++b)
      if (std::abs(w(a, b)) > tol) {
        throw NotLagrangianError("lagrangian_restriction: w(u" + std::to_string(a) + ", u" + std::to_string(b) +
                                     ") = " + std::to_string(w(a, b)) + " != 0",
                                 a, b);
      }
  const ComplexMatrix sc = s.cast<Complex>();
  PullbackTensor out = t;
  out.coefficients = sc.transpose() * t.coefficients * sc;
  return out;
}

inline std::vector<RealVector> basis_directions(Index size, const std::vector<Index>& indices) {
  std::vector<RealVector> out;
  for (Index i : indices) {
    if (i < 0 || i >= size) throw InvalidArgument("basis index out of range");
    out.push_back(RealVector::Unit(size, i));
  }
  return out;
}

namespace detail {

// Gauss-Hermite nodes and weights for the weight exp(-x^2) (Golub-Welsch).
inline std::pair<RealVector, RealVector> gauss_hermite(Index points) {
  RealMatrix jac = RealMatrix::Zero(points, points);
  for (Index i = 1; i < points; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(static_cast<double>(i) / 2.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jac);
  const RealVector nodes = solver.eigenvalues();
  RealVector weights(points);
  for (Index i = 0; i < points; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    weights[i] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  return {nodes, weights};
}

}  // namespace detail

// N^2 \int d^n q exp(-q^2) q_j q_k with N^2 pi^(n/2) = 1, by tensor-product
// Gauss-Hermite quadrature; j, k index the n position coordinates.
inline double gaussian_moment_oracle(Index j, Index k, Index n_modes, Index quadrature_points = 64) {
  if (quadrature_points < 32) throw InvalidArgument("gaussian_moment_oracle: need at least 32 quadrature points");
  if (n_modes < 1 || j < 0 || k < 0 || j >= n_modes || k >= n_modes) {
    throw InvalidArgument("gaussian_moment_oracle: index out of range");
  }
  const auto [nodes, weights] = detail::gauss_hermite(quadrature_points);
  std::vector<Index> idx(static_cast<std::size_t>(n_modes), 0);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (Index m = 0; m < n_modes; ++m) w *= weights[idx[static_cast<std::size_t>(m)]];
    sum += w * nodes[idx[static_cast<std::size_t>(j)]] * nodes[idx[static_cast<std::size_t>(k)]];
    Index m = 0;
    for (; m < n_modes; ++m) {
      if (++idx[static_cast<std::size_t>(m)] < quadrature_points) break;
      idx[static_cast<std::size_t>(m)] = 0;
    }
    if (m == n_modes) break;
  }
  return sum / std::pow(std::numbers::pi, 0.5 * static_cast<double>(n_modes));
}

}  // namespace qpt
