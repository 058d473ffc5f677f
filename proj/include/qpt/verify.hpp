#pragma once

// Invariant suites behind `qpt verify`. Each suite samples with a fixed seed
// and evaluates module properties on the supplied grid, returning one check
// per property.

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "qpt/grid.hpp"
#include "qpt/report.hpp"
#include "qpt/qgt.hpp"
#include "qpt/weyl.hpp"

namespace qpt::verify {

struct Context {
  const Grid& grid;
  std::optional<double> tol_override;
  double fd_step = kDefaultFdStep;
  std::uint64_t seed = 20240607;

  double tol(double module_default) const { return tol_override.value_or(module_default); }
};

namespace detail {

inline ComplexVector random_state(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = Complex(n(rng), n(rng));
  return v;
}

inline RealVector random_real(std::mt19937_64& rng, Index dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RealVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

inline EulerAngles random_euler(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 4.0 * std::numbers::pi), b(0.1, std::numbers::pi - 0.1),
      g(0.0, 2.0 * std::numbers::pi);
  return {a(rng), b(rng), g(rng)};
}

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

// Grid coordinates: lambda_re, lambda_im (rescaling factor in the scale
// invariance check; points with lambda = 0 are skipped).
inline Report hilbert_suite(const Context& ctx, Index dim = 4) {
  std::mt19937_64 rng(ctx.seed);
  Report r;
  double sesq = 0.0, hermsym = 0.0, degen = 0.0, symm = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto phi = detail::random_state(rng, dim), chi = detail::random_state(rng, dim),
               psi = detail::random_state(rng, dim), v = detail::random_state(rng, dim);
    const Complex a(std::normal_distribution<double>()(rng), 0.7), b(-0.4, std::normal_distribution<double>()(rng));
    sesq = std::max(sesq, std::abs(inner(a * phi + b * chi, psi) - (std::conj(a) * inner(phi, psi) + std::conj(b) * inner(chi, psi))));
    hermsym = std::max(hermsym, std::abs(inner(phi, psi) - std::conj(inner(psi, phi))));
    degen = std::max({degen, std::abs(projective_tensor_at(psi, psi, v).value),
                      std::abs(projective_tensor_at(psi, apply_complex_structure(psi), v).value)});
    const auto uv = projective_tensor_at(psi, phi, v), vu = projective_tensor_at(psi, v, phi);
    symm = std::max({symm, std::abs(uv.real_part() - vu.real_part()), std::abs(uv.imag_part() + vu.imag_part())});
  }
  r.add("inner_sesquilinear", sesq, ctx.tol(1e-12));
  r.add("inner_conjugate_symmetric", hermsym, ctx.tol(1e-12));
  r.add("projective_degenerate_along_psi_and_i_psi", degen, ctx.tol(1e-12));
  r.add("projective_real_symmetric_imag_antisymmetric", symm, ctx.tol(1e-12));

  double scale = 0.0;
  const auto psi = detail::random_state(rng, dim), u = detail::random_state(rng, dim), v = detail::random_state(rng, dim);
  const Complex base = projective_tensor_at(psi, u, v).value;
  for (Index i = 0; i < ctx.grid.size(); ++i) {
    const RealVector x = ctx.grid.point(i);
    const Complex lambda(x[0], x.size() > 1 ? x[1] : 0.0);
    if (std::abs(lambda) == 0.0) continue;
    scale = std::max(scale, detail::rel_diff(projective_tensor_at(lambda * psi, lambda * u, lambda * v).value, base));
  }
  r.add("projective_scale_invariant", scale, ctx.tol(1e-10));
  return r;
}

// Grid coordinates: alpha, beta, gamma (Maurer-Cartan and coframe checks).
inline Report liegroup_suite(const Context& ctx) {
  std::mt19937_64 rng(ctx.seed);
  Report r;
  double closure = 0.0;
  for (double s : {0.5, 1.0, 1.5, 2.0, 2.5}) closure = std::max(closure, su2_spin_rep(s).closure_residual());
  r.add("su2_closure", closure, ctx.tol(1e-10));

  const auto rep = su2_spin_rep(0.5);
  double mc = 0.0, det = 0.0;
  Index used = 0;
  for (Index i = 0; i < ctx.grid.size(); ++i) {
    const auto p = EulerAngles::from_vector(ctx.grid.point(i));
    det = std::max(det, std::abs(su2_coframe(p).theta.determinant() - std::sin(p.beta)));
    const auto res = maurer_cartan_residual(rep, p, ctx.fd_step);
    if (res.chart_degenerate) continue;
    mc = std::max(mc, res.residual);
    ++used;
  }
  r.add("maurer_cartan_on_grid", used > 0 ? mc : std::nan(""), ctx.tol(1e-8));
  r.add("coframe_determinant_is_sin_beta", det, ctx.tol(1e-12));

  double hom = 0.0, orth = 0.0, period = 0.0;
  for (int t = 0; t < 20; ++t) {
    const ExponentialCoordinates g{detail::random_real(rng, 3)}, h{detail::random_real(rng, 3)};
    const ComplexMatrix ug = group_element(rep, g), uh = group_element(rep, h);
    const RealMatrix ag = adjoint_matrix(rep, ug).matrix, ah = adjoint_matrix(rep, uh).matrix;
    hom = std::max(hom, (adjoint_matrix(rep, ComplexMatrix(ug * uh)).matrix - ag * ah).cwiseAbs().maxCoeff());
    orth = std::max(orth, (ag.transpose() * ag - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff());
    const auto e = detail::random_euler(rng);
    for (double s : {0.5, 1.5}) {
      const auto rs = su2_spin_rep(s);
      period = std::max(period, (group_element(rs, e) - group_element(rs, EulerAngles{e.alpha + 4 * std::numbers::pi, e.beta, e.gamma}))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
  }
  r.add("adjoint_homomorphism", hom, ctx.tol(1e-8));
  r.add("adjoint_orthogonal", orth, ctx.tol(1e-10));
  r.add("euler_4pi_periodic_half_integer", period, ctx.tol(1e-10));
  return r;
}

// Grid coordinates: those of `chart`.
inline Report pullback_suite(const LieAlgebraRep& rep, const ComplexVector& fiducial, const Chart& chart,
                             const Context& ctx) {
  Report r;
  const PullbackTensor lin = covariance_matrix(rep, fiducial, false);
  const PullbackTensor proj = covariance_matrix(rep, fiducial, true);
  r.add("coefficients_hermitian",
        std::max(hermiticity_defect(lin.coefficients), hermiticity_defect(proj.coefficients)), ctx.tol(1e-12));
  r.add("projective_metric_psd", std::max(0.0, -min_eigenvalue(proj.coefficients.real())), ctx.tol(1e-10));
  r.add("multiplier_consistency", multiplier_consistency(rep, fiducial), ctx.tol(1e-12));

  double scale = 0.0;
  for (Complex l : {Complex(2.5, 0.0), Complex(-0.3, 1.7), Complex(1e-3, -2e-3)}) {
    scale = std::max(scale, (covariance_matrix(rep, l * fiducial, true).coefficients - proj.coefficients).cwiseAbs().maxCoeff());
  }
  r.add("projective_rescaling_invariant", scale, ctx.tol(1e-12));

  double closed = 0.0, equiv = 0.0, symm = 0.0;
  const bool has_central = rep.multiplier_form().has_value();
  for (Index i = 0; i < ctx.grid.size(); ++i) {
    const RealVector x = ctx.grid.point(i);
    if (chart.dimension() >= 3) closed = std::max(closed, two_form_closedness(lin, chart, x, 1e-4));
    const CoordinateTensor ct = evaluate_at(lin, chart.coframe(x));
    symm = std::max({symm, (ct.metric - ct.metric.transpose()).cwiseAbs().maxCoeff(),
                     (ct.two_form + ct.two_form.transpose()).cwiseAbs().maxCoeff()});
    if (!has_central) {
      const ComplexMatrix u = chart.element(rep, x);
      const RealMatrix a = adjoint_matrix(rep, u).matrix;
      const ComplexMatrix moved = covariance_matrix(rep, u * fiducial, false).coefficients;
      const ComplexMatrix ac = a.cast<Complex>();
      equiv = std::max(equiv, (moved - ac * lin.coefficients * ac.transpose()).cwiseAbs().maxCoeff());
    }
  }
  r.add("two_form_closed_on_grid", closed, ctx.tol(1e-6));
  r.add("coordinate_tensor_symmetry", symm, ctx.tol(1e-14));
  if (!has_central) r.add("equivariance_on_grid", equiv, ctx.tol(1e-8));
  return r;
}

// Grid coordinates: q1..qn, p1..pn (displacements v1; v2 is the symplectic
// dual of v1 scaled to the same length).
inline Report weyl_suite(Index modes, Index cutoff, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed);
  Report r;
  const WeylSystem w = build_weyl(modes, cutoff);
  const PullbackTensor t = gaussian_covariance(w, false);
  const PullbackTensor tp = gaussian_covariance(w, true);
  const Index n2 = 2 * modes;
  r.add("metric_half_identity", std::max((t.coefficients.real() - 0.5 * RealMatrix::Identity(n2, n2)).cwiseAbs().maxCoeff(),
                                         (tp.coefficients.real() - 0.5 * RealMatrix::Identity(n2, n2)).cwiseAbs().maxCoeff()),
        ctx.tol(1e-14));
  r.add("form_half_omega", (t.coefficients.imag() - 0.5 * w.symplectic_form()).cwiseAbs().maxCoeff(), ctx.tol(1e-14));
  r.add("multiplier_consistency", multiplier_consistency(w.rep(), w.vacuum()), ctx.tol(1e-14));

  double quad = 0.0;
  for (Index j = 0; j < modes; ++j)
    for (Index k = 0; k < modes; ++k)
      quad = std::max(quad, std::abs(gaussian_moment_oracle(j, k, modes, 64) - t.coefficients(j, k).real()));
  r.add("quadrature_moments", quad, ctx.tol(1e-10));

  double lag = 0.0;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    // Per-mode rotation of the Q-plane is symplectic, so it maps the Q-plane to a Lagrangian plane.
    std::vector<RealVector> dirs;
    for (Index m = 0; m < modes; ++m) {
      const double a = angle(rng);
      RealVector d = RealVector::Zero(n2);
      d[m] = std::cos(a);
      d[modes + m] = std::sin(a);
      dirs.push_back(d);
    }
    lag = std::max(lag, lagrangian_restriction(t, dirs, w.symplectic_form()).coefficients.imag().cwiseAbs().maxCoeff());
  }
  r.add("lagrangian_kills_form", lag, ctx.tol(1e-14));

  const WeylSystem wide = build_weyl(modes, 2 * cutoff);
  double growth = 0.0;
  for (Index i = 0; i < ctx.grid.size(); ++i) {
    const RealVector v1 = ctx.grid.point(i);
    RealVector v2 = w.symplectic_form() * v1;
    const double d_small = weyl_relation_defect(w, v1, v2);
    const double d_large = weyl_relation_defect(wide, v1, v2);
    growth = std::max(growth, d_large - std::max(d_small, 1e-13));
  }
  r.add("defect_nonincreasing_in_cutoff", std::max(growth, 0.0), ctx.tol(0.0));
  r.notes.push_back("defect comparison allows a 1e-13 double-precision floor");
  return r;
}

// Grid coordinates: those of the Hamiltonian family.
inline Report qgt_suite(const HamiltonianFamily& family, Index level, const Context& ctx, const QGTOptions& opts = {}) {
  Report r;
  double herm = 0.0, psd = 0.0, agree = 0.0, orth = 0.0, real_im = 0.0;
  bool all_real = true;
  for (Index i = 0; i < ctx.grid.size(); ++i) {
    const RealVector x = ctx.grid.point(i);
    const ComplexMatrix hx = family.evaluate(x);
    all_real = all_real && hx.imag().cwiseAbs().maxCoeff() == 0.0;
    const QGTResult q = qgt_tensor(family, x, level, opts);
    const QGTResult f = finite_difference_qgt(family, x, level, ctx.fd_step, opts);
    herm = std::max(herm, hermiticity_defect(q.h));
    psd = std::max(psd, std::max(0.0, -min_eigenvalue(q.metric)));
    agree = std::max(agree, (q.h - f.h).cwiseAbs().maxCoeff());
    real_im = std::max(real_im, q.h.imag().cwiseAbs().maxCoeff());
    const Eigensystem es = hermitian_eigensystem(hx);
    for (Index mu = 0; mu < family.param_dim(); ++mu) {
      orth = std::max(orth, std::abs(inner(es.vectors.col(level), spectral_state_derivative(family, x, level, mu, opts))));
    }
  }
  r.add("qgt_hermitian", herm, ctx.tol(1e-12));
  r.add("metric_psd", psd, ctx.tol(1e-10));
  r.add("spectral_vs_finite_difference", agree, ctx.tol(1e-6));
  r.add("derivative_orthogonal_to_state", orth, ctx.tol(1e-12));
  if (all_real) r.add("real_family_has_no_form", real_im, ctx.tol(1e-10));
  return r;
}

}  // namespace qpt::verify
