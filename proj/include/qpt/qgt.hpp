#pragma once

// Quantum geometric tensor of a parametrized eigenstate |a; lambda>:
//   h_mn = <d_m psi|d_n psi> - <psi|d_n psi><d_m psi|psi>
// with the state derivative from the spectral sum
//   d_m|a> = sum_{b != a} |b><b|d_m H|a> / (E_a - E_b),
// and an independent finite-difference route over phase-aligned eigenvectors.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qpt/pullback.hpp"

namespace qpt {

class HamiltonianFamily {
 public:
  using Evaluator = std::function<ComplexMatrix(const RealVector&)>;
  using Derivative = std::function<ComplexMatrix(const RealVector&, Index)>;

  // `evaluate` (and `derivative`, if given) may be called concurrently.
  // Without an analytic derivative, d_m H is taken by central differences.
  HamiltonianFamily(Index param_dim, Evaluator evaluate, Derivative derivative = {}, double fd_step = kDefaultFdStep)
      : param_dim_(param_dim), evaluate_(std::move(evaluate)), derivative_(std::move(derivative)), fd_step_(fd_step) {
    if (param_dim_ < 1) throw InvalidArgument("HamiltonianFamily: need at least one parameter");
    if (!(fd_step_ > 0.0)) throw InvalidArgument("HamiltonianFamily: fd step must be positive");
  }

  // H(lambda) = H0 + sum_m lambda^m H_m
  static HamiltonianFamily affine(ComplexMatrix h0, std::vector<ComplexMatrix> terms) {
    if (terms.empty()) throw InvalidArgument("affine family: at least one parameter term required");
    if (!is_hermitian(h0)) throw InvalidArgument("affine family: h0 is not Hermitian");
    for (std::size_t m = 0; m < terms.size(); ++m) {
      require_same_dim(terms[m].rows(), h0.rows(), "affine family");
      require_same_dim(terms[m].cols(), h0.cols(), "affine family");
      if (!is_hermitian(terms[m])) throw InvalidArgument("affine family: term " + std::to_string(m) + " is not Hermitian");
    }
    const Index m = static_cast<Index>(terms.size());
    auto eval = [h0, terms](const RealVector& l) {
      require_same_dim(l.size(), static_cast<Index>(terms.size()), "affine family");
      ComplexMatrix h = h0;
      for (std::size_t k = 0; k < terms.size(); ++k) h += l[static_cast<Index>(k)] * terms[k];
      return h;
    };
    auto deriv = [terms](const RealVector&, Index mu) { return terms.at(static_cast<std::size_t>(mu)); };
    return {m, eval, deriv};
  }

  Index param_dim() const { return param_dim_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  double fd_step() const { return fd_step_; }

  ComplexMatrix evaluate(const RealVector& lambda) const {
    require_same_dim(lambda.size(), param_dim_, "HamiltonianFamily::evaluate");
    ComplexMatrix h = evaluate_(lambda);
    if (!is_hermitian(h)) {
      throw InvalidArgument("HamiltonianFamily: H(lambda) is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(h)) + ")");
    }
    return h;
  }

  ComplexMatrix derivative(const RealVector& lambda, Index mu) const {
    require_same_dim(lambda.size(), param_dim_, "HamiltonianFamily::derivative");
    if (mu < 0 || mu >= param_dim_) throw InvalidArgument("HamiltonianFamily::derivative: direction out of range");
    if (derivative_) return derivative_(lambda, mu);
    RealVector lp = lambda, lm = lambda;
    lp[mu] += fd_step_;
    lm[mu] -= fd_step_;
    return (evaluate(lp) - evaluate(lm)) / (2.0 * fd_step_);
  }

 private:
  Index param_dim_;
  Evaluator evaluate_;
  Derivative derivative_;
  double fd_step_;
};

inline ComplexMatrix pauli(int j) {
  ComplexMatrix s(2, 2);
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw InvalidArgument("pauli: index must be 0..3");
  }
  return s;
}

// H(theta, phi) = n(theta, phi).sigma with n on the unit sphere.
inline HamiltonianFamily bloch_family() {
  auto eval = [](const RealVector& l) {
    const double st = std::sin(l[0]), ct = std::cos(l[0]), sp = std::sin(l[1]), cp = std::cos(l[1]);
    return ComplexMatrix(st * cp * pauli(1) + st * sp * pauli(2) + ct * pauli(3));
  };
  auto deriv = [](const RealVector& l, Index mu) {
    const double st = std::sin(l[0]), ct = std::cos(l[0]), sp = std::sin(l[1]), cp = std::cos(l[1]);
    if (mu == 0) return ComplexMatrix(ct * cp * pauli(1) + ct * sp * pauli(2) - st * pauli(3));
    return ComplexMatrix(-st * sp * pauli(1) + st * cp * pauli(2));
  };
  return {2, eval, deriv};
}

// H(lambda) = lambda sigma^3 + delta sigma^1
inline HamiltonianFamily landau_zener_family(double delta) {
  return HamiltonianFamily::affine(delta * pauli(1), {pauli(3)});
}

struct QGTOptions {
  // A level is usable when its gap is at least this fraction of the spectral radius.
  double degeneracy_tol = 1e-8;
};

struct QGTResult {
  RealVector point;
  ComplexMatrix h;
  RealMatrix metric;      // Re h
  RealMatrix berry_form;  // -(Im h - Im h^T) = -2 Im h
  double gap = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double level_gap(const RealVector& energies, Index a) {
  double gap = std::numeric_limits<double>::infinity();
  for (Index b = 0; b < energies.size(); ++b)
    if (b != a) gap = std::min(gap, std::abs(energies[a] - energies[b]));
  return gap;
}

inline double checked_gap(const Eigensystem& es, Index a, const QGTOptions& opts) {
  if (a < 0 || a >= es.values.size()) throw InvalidArgument("level index out of range");
  const double gap = level_gap(es.values, a);
  if (!(gap > 0.0) || gap < opts.degeneracy_tol * spectral_radius(es.values)) {
    throw DegenerateLevelError("level " + std::to_string(a) + " is degenerate (gap " + std::to_string(gap) + ")", gap);
  }
  return gap;
}

inline ComplexVector spectral_sum(const Eigensystem& es, Index a, const ComplexMatrix& dh) {
  const ComplexVector psi = es.vectors.col(a);
  const ComplexVector dh_psi = dh * psi;
  ComplexVector out = ComplexVector::Zero(psi.size());
  for (Index b = 0; b < es.values.size(); ++b) {
    if (b == a) continue;
    const ComplexVector vb = es.vectors.col(b);
    out += vb * (vb.dot(dh_psi) / (es.values[a] - es.values[b]));
  }
  return out;
}

inline ComplexMatrix assemble_qgt(const ComplexVector& psi, const std::vector<ComplexVector>& dpsi) {
  const Index m = static_cast<Index>(dpsi.size());
  ComplexMatrix h(m, m);
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu) {
      const auto& dm = dpsi[static_cast<std::size_t>(mu)];
      const auto& dn = dpsi[static_cast<std::size_t>(nu)];
      h(mu, nu) = inner(dm, dn) - inner(psi, dn) * inner(dm, psi);
    }
  return h;
}

inline QGTResult package(RealVector point, ComplexMatrix h, double gap) {
  const RealMatrix im = h.imag();
  RealMatrix re = h.real();
  return {std::move(point), h, re, -(im - im.transpose()), gap};
}

}  // namespace detail

inline ComplexVector spectral_state_derivative(const HamiltonianFamily& family, const RealVector& lambda, Index a,
                                               Index mu, const QGTOptions& opts = {}) {
  const Eigensystem es = hermitian_eigensystem(family.evaluate(lambda));
  detail::checked_gap(es, a, opts);
  return detail::spectral_sum(es, a, family.derivative(lambda, mu));
}

inline QGTResult qgt_tensor(const HamiltonianFamily& family, const RealVector& lambda, Index a,
                            const QGTOptions& opts = {}) {
  const Eigensystem es = hermitian_eigensystem(family.evaluate(lambda));
  const double gap = detail::checked_gap(es, a, opts);
  std::vector<ComplexVector> dpsi;
  for (Index mu = 0; mu < family.param_dim(); ++mu) {
    dpsi.push_back(detail::spectral_sum(es, a, family.derivative(lambda, mu)));
  }
  return detail::package(lambda, detail::assemble_qgt(es.vectors.col(a), dpsi), gap);
}

// lambda -> normalized state, in whatever phase the producer chooses.
using StateMap = std::function<ComplexVector(const RealVector&)>;

inline constexpr double kMinAlignmentOverlap = 0.5;

// Central differences of states phase-aligned to psi(lambda) so that
// <psi(lambda)|psi(lambda')> is real and positive.
inline QGTResult finite_difference_qgt(const StateMap& states, const RealVector& lambda, double step) {
  if (!(step > 0.0)) throw InvalidArgument("finite_difference_qgt: step must be positive");
  const ComplexVector psi = normalized(states(lambda));
  auto aligned = [&](const RealVector& l) {
    ComplexVector v = normalized(states(l));
    const Complex ov = inner(psi, v);
    if (std::abs(ov) < kMinAlignmentOverlap) {
      throw NumericalRefusal("finite_difference_qgt: alignment overlap " + std::to_string(std::abs(ov)) +
                             " below " + std::to_string(kMinAlignmentOverlap) + "; reduce the step");
    }
    return ComplexVector(v * (std::conj(ov) / std::abs(ov)));
  };
  std::vector<ComplexVector> dpsi;
  for (Index mu = 0; mu < lambda.size(); ++mu) {
    RealVector lp = lambda, lm = lambda;
    lp[mu] += step;
    lm[mu] -= step;
    dpsi.push_back((aligned(lp) - aligned(lm)) / (2.0 * step));
  }
  return detail::package(lambda, detail::assemble_qgt(psi, dpsi), std::numeric_limits<double>::quiet_NaN());
}

inline QGTResult finite_difference_qgt(const HamiltonianFamily& family, const RealVector& lambda, Index a,
                                       double step = kDefaultFdStep, const QGTOptions& opts = {}) {
  auto level_state = [&](const RealVector& l) {
    const Eigensystem es = hermitian_eigensystem(family.evaluate(l));
    detail::checked_gap(es, a, opts);
    return ComplexVector(es.vectors.col(a));
  };
  const Eigensystem es = hermitian_eigensystem(family.evaluate(lambda));
  const double gap = detail::checked_gap(es, a, opts);
  QGTResult r = finite_difference_qgt(level_state, lambda, step);
  r.gap = gap;
  return r;
}

// ---------------------------------------------------------------------------
// Orbit versus parametrized-Hamiltonian consistency on the SU(2) Euler chart.

struct OrbitGrid {
  double alpha = 0.4;
  double beta_min = 0.3, beta_max = 2.8;
  double gamma_min = 0.2, gamma_max = 6.0;
  Index beta_count = 5, gamma_count = 5;
};

struct OrbitConsistency {
  double metric_residual = 0.0;
  double form_residual = 0.0;
  Index points = 0;
};

inline RealVector grid_axis(double lo, double hi, Index count) {
  if (count < 1) throw InvalidArgument("grid axis needs at least one point");
  if (count == 1) return RealVector::Constant(1, lo);
  return RealVector::LinSpaced(count, lo, hi);
}

// Builds H(g) = U(g) H0 U(g)^dag with H0 = -sum_j n^j R_j, takes the QGT of
// its ground state over the chart, and compares it with the projective
// pull-back scale^2 * T_jk alpha_j (x) alpha_k in the left-invariant coframe
// (the ground state of H(g) is U(g)|0> up to phase).
inline OrbitConsistency orbit_consistency_check(const LieAlgebraRep& rep, const RealVector& direction,
                                                const OrbitGrid& grid = {}, const QGTOptions& opts = {}) {
  require_same_dim(direction.size(), rep.size(), "orbit_consistency_check");
  const ComplexMatrix h0 = -rep.combination(direction);
  const Eigensystem es0 = hermitian_eigensystem(h0);
  detail::checked_gap(es0, 0, opts);
  const ComplexVector fiducial = es0.vectors.col(0);

  const Chart chart = Chart::su2_euler(FrameSide::left);
  const HamiltonianFamily family(3, [&rep, &chart, h0](const RealVector& x) {
    const ComplexMatrix u = chart.element(rep, x);
    return ComplexMatrix(u * h0 * u.adjoint());
  });
  const PullbackTensor t = covariance_matrix(rep, fiducial, true);
  const double s2 = chart.generator_scale() * chart.generator_scale();

  OrbitConsistency out;
  for (double beta : grid_axis(grid.beta_min, grid.beta_max, grid.beta_count)) {
    for (double gamma : grid_axis(grid.gamma_min, grid.gamma_max, grid.gamma_count)) {
      const RealVector x{{grid.alpha, beta, gamma}};
      const QGTResult q = qgt_tensor(family, x, 0, opts);
      const CoordinateTensor p = evaluate_at(t, chart.coframe(x));
      out.metric_residual = std::max(out.metric_residual, (q.metric - s2 * p.metric).cwiseAbs().maxCoeff());
      out.form_residual =
          std::max(out.form_residual, (RealMatrix(q.h.imag()) - s2 * p.two_form).cwiseAbs().maxCoeff());
      ++out.points;
    }
  }
  return out;
}

}  // namespace qpt
