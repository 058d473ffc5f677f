#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "qpt/weyl.hpp"

using namespace qpt;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }
double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

RealVector vec2(double a, double b) { return RealVector{{a, b}}; }

ComplexMatrix kron_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// A Lagrangian plane of R^{2n}: the Q-plane moved by a random symplectic
// rotation exp(t J K) with K symmetric.
std::vector<RealVector> rotated_q_plane(std::mt19937_64& rng, Index modes) {
  const Index n2 = 2 * modes;
  std::normal_distribution<double> g;
  RealMatrix k(n2, n2);
  for (Index i = 0; i < n2; ++i)
    for (Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = g(rng);
  const RealMatrix jk = standard_symplectic_form(modes) * k;
  RealMatrix s = oracle::expm_taylor(ComplexMatrix(0.2 * jk.cast<Complex>())).real();
  std::vector<RealVector> dirs;
  for (Index j = 0; j < modes; ++j) dirs.push_back(s.col(j));
  return dirs;
}

}  // namespace

TEST(BuildWeyl, LadderMatrixEntries) {
  const WeylSystem w = build_weyl(1, 4);
  const ComplexMatrix& q = w.position(0);
  EXPECT_NEAR(q(0, 1).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q(1, 0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q(1, 2).real(), 1.0, 1e-15);
  EXPECT_NEAR(q(2, 1).real(), 1.0, 1e-15);
  EXPECT_TRUE(is_hermitian(q));
  EXPECT_TRUE(is_hermitian(w.momentum(0)));
}

TEST(BuildWeyl, VacuumMoments) {
  const WeylSystem w = build_weyl(1, 8);
  const ComplexVector& v = w.vacuum();
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(oracle::sandwich(v, w.position(0), w.position(0)) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.dot(w.position(0) * v)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.dot(w.momentum(0) * v)), 0.0, 1e-15);
  const ComplexMatrix qp = w.position(0) * w.momentum(0) - w.momentum(0) * w.position(0);
  EXPECT_NEAR(std::abs(v.dot(qp * v) - kI), 0.0, 1e-15);
  // annihilated by (Q + iP)/sqrt2
  EXPECT_LT(((w.position(0) + kI * w.momentum(0)) * v).norm(), 1e-15);
}

TEST(BuildWeyl, RejectsSmallCutoff) {
  EXPECT_THROW(build_weyl(1, 2), InvalidArgument);
  EXPECT_NO_THROW(build_weyl(1, 3));
}

TEST(Displacement, IdentityAndUnitarity) {
  const WeylSystem w = build_weyl(2, 6);
  EXPECT_LT(max_abs(ComplexMatrix(displacement(w, RealVector::Zero(4)) - ComplexMatrix::Identity(36, 36))), 1e-14);
  std::mt19937_64 rng(61);
  for (int t = 0; t < 5; ++t) {
    EXPECT_LT(unitarity_defect(displacement(w, oracle::random_vector(rng, 4, -0.5, 0.5))), 1e-12);
  }
  EXPECT_THROW(displacement(w, RealVector::Zero(3)), DimensionError);
}

TEST(Displacement, MatchesTaylorOracle) {
  const WeylSystem w = build_weyl(1, 10);
  const RealVector v = vec2(0.3, -0.2);
  const ComplexMatrix ref =
      oracle::expm_taylor(ComplexMatrix(kI * (v[0] * w.position(0) + v[1] * w.momentum(0))));
  EXPECT_LT(max_abs(ComplexMatrix(displacement(w, v) - ref)), 1e-12);
}

TEST(Displacement, ConjugationShiftsQuadratures) {
  // W(v) Q W(v)^dag = Q + v_p and W(v) P W(v)^dag = P - v_q on low Fock states.
  const WeylSystem w = build_weyl(1, 48);
  const RealVector v = vec2(0.15, 0.2);
  const ComplexMatrix d = displacement(w, v);
  const ComplexMatrix dq = (d * w.position(0) * d.adjoint() - w.position(0)).topLeftCorner(6, 6);
  const ComplexMatrix dp = (d * w.momentum(0) * d.adjoint() - w.momentum(0)).topLeftCorner(6, 6);
  EXPECT_LT(max_abs(ComplexMatrix(dq - v[1] * ComplexMatrix::Identity(6, 6))), 1e-10);
  EXPECT_LT(max_abs(ComplexMatrix(dp + v[0] * ComplexMatrix::Identity(6, 6))), 1e-10);
}

TEST(WeylRelation, DefectShrinksWithCutoff) {
  const RealVector v1 = vec2(0.5, 0.0), v2 = vec2(0.0, 0.5);
  double previous = 1.0;
  for (Index cutoff : {8, 16, 32}) {
    const double d = weyl_relation_defect(build_weyl(1, cutoff), v1, v2);
    EXPECT_LT(d, previous) << "cutoff " << cutoff;
    previous = d;
  }
  EXPECT_LE(previous, 1e-6);
}

TEST(WeylRelation, PhaseFollowsCommutator) {
  // W(v1) W(v2) = exp(-i w(v1, v2)) W(v2) W(v1) when [R(v1), R(v2)] = i w(v1, v2).
  const WeylSystem w = build_weyl(1, 32);
  const RealVector v1 = vec2(0.4, 0.1), v2 = vec2(-0.2, 0.3);
  const ComplexMatrix d1 = displacement(w, v1), d2 = displacement(w, v2);
  const ComplexVector& vac = w.vacuum();
  const ComplexVector lhs = d1 * (d2 * vac), rhs = d2 * (d1 * vac);
  const Complex ratio = rhs.dot(lhs);  // <rhs|lhs>, |rhs| = 1
  EXPECT_NEAR(std::arg(ratio), -w.omega(v1, v2), 1e-10);
  // the opposite phase leaves an O(w) defect
  EXPECT_GT((lhs - std::polar(1.0, w.omega(v1, v2)) * rhs).norm(), 0.1 * std::abs(w.omega(v1, v2)));
}

TEST(WeylRelation, TwoModes) {
  const RealVector v1{{0.3, -0.2, 0.1, 0.25}}, v2{{-0.1, 0.2, 0.3, -0.15}};
  const double d8 = weyl_relation_defect(build_weyl(2, 8), v1, v2);
  const double d16 = weyl_relation_defect(build_weyl(2, 16), v1, v2);
  EXPECT_LT(d16, d8);
  EXPECT_LE(d16, 1e-6);
}

TEST(GaussianCovariance, SingleMode) {
  const WeylSystem w = build_weyl(1, 16);
  ComplexMatrix expected(2, 2);
  expected << 0.5, 0.5 * kI, -0.5 * kI, 0.5;
  EXPECT_LT(max_abs(ComplexMatrix(gaussian_covariance(w, false).coefficients - expected)), 1e-15);
  EXPECT_LT(max_abs(ComplexMatrix(gaussian_covariance(w, true).coefficients - expected)), 1e-15);
}

TEST(GaussianCovariance, TwoModesAgainstLadderMoments) {
  const WeylSystem w = build_weyl(2, 5);
  const PullbackTensor t = gaussian_covariance(w, false);
  EXPECT_LT(max_abs(RealMatrix(t.coefficients.real() - 0.5 * RealMatrix::Identity(4, 4))), 1e-14);
  EXPECT_LT(max_abs(RealMatrix(t.coefficients.imag() - 0.5 * standard_symplectic_form(2))), 1e-14);
  // brute-force moments with explicitly built mode operators, mode 1 outermost
  const ComplexMatrix a = oracle::annihilation(5), id = ComplexMatrix::Identity(5, 5);
  const ComplexMatrix q = (a + a.adjoint()) / std::sqrt(2.0), p = kI * (a.adjoint() - a) / std::sqrt(2.0);
  const std::vector<ComplexMatrix> ops{kron_loops(q, id), kron_loops(id, q), kron_loops(p, id), kron_loops(id, p)};
  const ComplexVector vac = ComplexVector::Unit(25, 0);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      EXPECT_NEAR(std::abs(t.coefficients(j, k) - oracle::sandwich(vac, ops[j], ops[k])), 0.0, 1e-14);
}

TEST(GaussianCovariance, MultiplierConsistencyIsExact) {
  for (Index modes : {1, 2}) {
    const WeylSystem w = build_weyl(modes, 8);
    EXPECT_LE(multiplier_consistency(w.rep(), w.vacuum()), 1e-15);
  }
}

TEST(LagrangianRestriction, CoordinateLines) {
  const WeylSystem w = build_weyl(1, 16);
  const PullbackTensor t = gaussian_covariance(w, false);
  for (Index idx : {0, 1}) {
    const PullbackTensor r = lagrangian_restriction(t, basis_directions(2, {idx}), w.symplectic_form());
    ASSERT_EQ(r.size(), 1);
    EXPECT_NEAR(r.coefficients(0, 0).real(), 0.5, 1e-15);
    EXPECT_EQ(r.coefficients(0, 0).imag(), 0.0);
  }
  const PullbackTensor diag =
      lagrangian_restriction(t, {RealVector{{1.0, 1.0}} / std::sqrt(2.0)}, w.symplectic_form());
  EXPECT_NEAR(diag.coefficients(0, 0).real(), 0.5, 1e-15);
  EXPECT_LE(std::abs(diag.coefficients(0, 0).imag()), 1e-14);
}

TEST(LagrangianRestriction, RandomSymplecticRotationsOfQPlane) {
  std::mt19937_64 rng(62);
  for (Index modes : {1, 2}) {
    const WeylSystem w = build_weyl(modes, 6);
    const PullbackTensor t = gaussian_covariance(w, false);
    for (int k = 0; k < 10; ++k) {
      const auto dirs = rotated_q_plane(rng, modes);
      const PullbackTensor r = lagrangian_restriction(t, dirs, w.symplectic_form(), 1e-10);
      EXPECT_LE(r.coefficients.imag().cwiseAbs().maxCoeff(), 1e-14);
      RealMatrix s(2 * modes, modes);
      for (Index c = 0; c < modes; ++c) s.col(c) = dirs[static_cast<std::size_t>(c)];
      EXPECT_LT(max_abs(RealMatrix(r.coefficients.real() - 0.5 * s.transpose() * s)), 1e-13);
    }
  }
}

TEST(LagrangianRestriction, RejectsNonLagrangian) {
  const WeylSystem w = build_weyl(2, 4);
  const PullbackTensor t = gaussian_covariance(w, false);
  try {
    lagrangian_restriction(t, basis_directions(4, {0, 2}), w.symplectic_form());  // Q1, P1
    FAIL() << "expected NotLagrangianError";
  } catch (const NotLagrangianError& e) {
    EXPECT_EQ(e.first(), 0);
    EXPECT_EQ(e.second(), 1);
  }
  EXPECT_THROW(lagrangian_restriction(t, basis_directions(4, {0}), w.symplectic_form()), InvalidArgument);
  EXPECT_THROW(lagrangian_restriction(t, basis_directions(4, {0, 0}), w.symplectic_form()), InvalidArgument);
  EXPECT_THROW(basis_directions(4, {4}), InvalidArgument);
}

TEST(MomentOracle, QuadratureValues) {
  for (Index n : {1, 2, 3}) {
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        EXPECT_NEAR(gaussian_moment_oracle(j, k, n, 32), j == k ? 0.5 : 0.0, 1e-12) << n << " " << j << " " << k;
  }
}

TEST(MomentOracle, AgreesWithFockMoments) {
  const WeylSystem w = build_weyl(2, 8);
  const PullbackTensor t = gaussian_covariance(w, false);
  for (Index j = 0; j < 2; ++j)
    for (Index k = 0; k < 2; ++k)
      EXPECT_NEAR(gaussian_moment_oracle(j, k, 2, 64), t.coefficients(j, k).real(), 1e-10);
}

TEST(MomentOracle, RejectsTooFewPoints) { EXPECT_THROW(gaussian_moment_oracle(0, 0, 1, 16), InvalidArgument); }
