#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "qpt/qgt.hpp"

using namespace qpt;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

HamiltonianFamily rotating_family() {
  return HamiltonianFamily(
      1, [](const RealVector& l) { return ComplexMatrix(std::cos(l[0]) * pauli(3) + std::sin(l[0]) * pauli(1)); },
      [](const RealVector& l, Index) { return ComplexMatrix(-std::sin(l[0]) * pauli(3) + std::cos(l[0]) * pauli(1)); });
}

HamiltonianFamily constant_family() { return HamiltonianFamily::affine(pauli(3), {ComplexMatrix::Zero(2, 2)}); }

HamiltonianFamily random_affine(std::mt19937_64& rng, Index dim, Index params, bool real) {
  std::normal_distribution<double> g;
  auto herm = [&] {
    ComplexMatrix a(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) a(i, j) = real ? Complex(g(rng), 0) : Complex(g(rng), g(rng));
    return ComplexMatrix(0.5 * (a + a.adjoint()));
  };
  ComplexMatrix h0 = herm();
  // spread the spectrum so every level is well gapped near lambda = 0
  for (Index i = 0; i < dim; ++i) h0(i, i) += 3.0 * static_cast<double>(i);
  std::vector<ComplexMatrix> terms;
  for (Index m = 0; m < params; ++m) terms.push_back(ComplexMatrix(0.3 * herm()));
  return HamiltonianFamily::affine(h0, terms);
}

}  // namespace

TEST(HamiltonianFamily, AffineEvaluationAndDerivative) {
  const HamiltonianFamily f = landau_zener_family(0.7);
  EXPECT_TRUE(f.has_analytic_derivative());
  EXPECT_LT(max_abs(ComplexMatrix(f.evaluate(RealVector{{0.4}}) - (0.4 * pauli(3) + 0.7 * pauli(1)))), 1e-15);
  EXPECT_EQ(f.derivative(RealVector{{1.3}}, 0), pauli(3));
  EXPECT_THROW(f.evaluate(RealVector{{0.1, 0.2}}), DimensionError);
  EXPECT_THROW(f.derivative(RealVector{{0.1}}, 1), InvalidArgument);
}

TEST(HamiltonianFamily, CallbackFamilyUsesCentralDifferences) {
  const HamiltonianFamily f(1, [](const RealVector& l) { return ComplexMatrix(std::sin(l[0]) * pauli(1)); });
  EXPECT_FALSE(f.has_analytic_derivative());
  EXPECT_LT(max_abs(ComplexMatrix(f.derivative(RealVector{{0.3}}, 0) - std::cos(0.3) * pauli(1))), 1e-9);
}

TEST(HamiltonianFamily, RejectsNonHermitian) {
  ComplexMatrix bad = pauli(1);
  bad(0, 1) = 2.0;
  EXPECT_THROW(HamiltonianFamily::affine(bad, {pauli(3)}), InvalidArgument);
  EXPECT_THROW(HamiltonianFamily::affine(pauli(1), {bad}), InvalidArgument);
  const HamiltonianFamily f(1, [bad](const RealVector&) { return bad; });
  EXPECT_THROW(f.evaluate(RealVector{{0.0}}), InvalidArgument);
  EXPECT_THROW(HamiltonianFamily::affine(pauli(1), {}), InvalidArgument);
  EXPECT_THROW(pauli(4), InvalidArgument);
}

TEST(SpectralDerivative, ConstantFamilyGivesZero) {
  EXPECT_EQ(spectral_state_derivative(constant_family(), RealVector{{0.5}}, 0, 0).norm(), 0.0);
}

TEST(SpectralDerivative, RotatingFieldHasNormHalf) {
  const ComplexVector d = spectral_state_derivative(rotating_family(), RealVector{{0.0}}, 0, 0);
  EXPECT_NEAR(d.norm(), 0.5, 1e-14);
  // oracle: derivative of the closed-form ground state, up to its real phase
  const ComplexVector ref = (oracle::bloch_ground(1e-5, 0.0) - oracle::bloch_ground(-1e-5, 0.0)) / 2e-5;
  const ComplexVector psi = oracle::bloch_ground(0.0, 0.0);
  const Complex phase = psi.dot(hermitian_eigensystem(pauli(3)).vectors.col(0));
  EXPECT_LT((d - ref * phase).norm(), 1e-9);
}

TEST(SpectralDerivative, OrthogonalToLevelOnRandomFamilies) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 10; ++t) {
    const HamiltonianFamily f = random_affine(rng, 4, 2, false);
    const RealVector l = oracle::random_vector(rng, 2, -0.5, 0.5);
    const Eigensystem es = hermitian_eigensystem(f.evaluate(l));
    for (Index a = 0; a < 4; ++a) {
      const ComplexVector d = spectral_state_derivative(f, l, a, 1);
      EXPECT_LT(std::abs(es.vectors.col(a).dot(d)), 1e-12);
    }
  }
}

TEST(SpectralDerivative, MatchesFiniteDifferenceOfAlignedStates) {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 5; ++t) {
    const HamiltonianFamily f = random_affine(rng, 3, 2, false);
    const RealVector l = oracle::random_vector(rng, 2, -0.3, 0.3);
    const Index a = t % 3;
    const Eigensystem es = hermitian_eigensystem(f.evaluate(l));
    ASSERT_GE(detail::level_gap(es.values, a), 0.1);
    const ComplexVector psi = es.vectors.col(a);
    for (Index mu = 0; mu < 2; ++mu) {
      auto aligned = [&](double s) {
        RealVector x = l;
        x[mu] += s;
        ComplexVector v = hermitian_eigensystem(f.evaluate(x)).vectors.col(a);
        const Complex ov = psi.dot(v);
        return ComplexVector(v * std::conj(ov) / std::abs(ov));
      };
      const ComplexVector fd = (aligned(1e-5) - aligned(-1e-5)) / 2e-5;
      EXPECT_LT((spectral_state_derivative(f, l, a, mu) - fd).norm(), 1e-6);
    }
  }
}

TEST(SpectralDerivative, DegenerateLevelRefused) {
  const HamiltonianFamily f = HamiltonianFamily::affine(ComplexMatrix::Identity(2, 2), {pauli(3)});
  try {
    spectral_state_derivative(f, RealVector{{0.0}}, 0, 0);
    FAIL() << "expected DegenerateLevelError";
  } catch (const DegenerateLevelError& e) {
    EXPECT_EQ(e.gap(), 0.0);
  }
  // nearly degenerate: below the relative tolerance
  EXPECT_THROW(qgt_tensor(f, RealVector{{1e-10}}, 0), NumericalRefusal);
  EXPECT_NO_THROW(qgt_tensor(f, RealVector{{1e-10}}, 0, QGTOptions{1e-12}));
  EXPECT_THROW(qgt_tensor(f, RealVector{{0.5}}, 2), InvalidArgument);
}

TEST(QgtTensor, BlochFamilyGround) {
  const HamiltonianFamily f = bloch_family();
  std::mt19937_64 rng(73);
  for (int t = 0; t < 20; ++t) {
    const RealVector l{{0.2 + 2.7 * t / 19.0, oracle::random_vector(rng, 1, 0, 6.28)[0]}};
    const QGTResult q = qgt_tensor(f, l, 0);
    const double st = std::sin(l[0]);
    EXPECT_NEAR(q.metric(0, 0), 0.25, 1e-8);
    EXPECT_NEAR(q.metric(1, 1), 0.25 * st * st, 1e-8);
    EXPECT_NEAR(q.metric(0, 1), 0.0, 1e-8);
    EXPECT_NEAR(q.gap, 2.0, 1e-12);
    // closed-form state oracle
    const ComplexMatrix ref = oracle::qgt_of_smooth_state(
        [](const RealVector& x) { return oracle::bloch_ground(x[0], x[1]); }, l);
    EXPECT_LT(max_abs(ComplexMatrix(q.h - ref)), 1e-8);
    // Berry curvature of the lower band: F_theta_phi = -2 Im h = -sin(theta)/2 here
    EXPECT_NEAR(q.berry_form(0, 1), -2.0 * q.h(0, 1).imag(), 1e-15);
    EXPECT_NEAR(std::abs(q.berry_form(0, 1)), 0.5 * st, 1e-8);
    EXPECT_LE(hermiticity_defect(q.h), 1e-14);
  }
}

TEST(QgtTensor, LandauZener) {
  for (double delta : {1.0, 0.5, 2.0}) {
    for (double lambda : {0.0, 0.3, -1.2}) {
      const QGTResult q = qgt_tensor(landau_zener_family(delta), RealVector{{lambda}}, 0);
      const double d2 = delta * delta, r = lambda * lambda + d2;
      EXPECT_NEAR(q.h(0, 0).real(), d2 / (4 * r * r), 1e-10);
      const ComplexMatrix ref =
          oracle::qgt_of_smooth_state([delta](const RealVector& x) { return oracle::lz_ground(x[0], delta); },
                                      RealVector{{lambda}});
      EXPECT_NEAR(q.h(0, 0).real(), ref(0, 0).real(), 1e-8);
    }
  }
  EXPECT_NEAR(qgt_tensor(landau_zener_family(1.0), RealVector{{0.0}}, 0).h(0, 0).real(), 0.25, 1e-10);
}

TEST(QgtTensor, GapScaling) {
  const double h1 = qgt_tensor(landau_zener_family(1.0), RealVector{{0.0}}, 0).metric(0, 0);
  const double h2 = qgt_tensor(landau_zener_family(0.5), RealVector{{0.0}}, 0).metric(0, 0);
  EXPECT_NEAR(h2 / h1, 4.0, 4e-8);
}

TEST(QgtTensor, ConstantFamilyIsZero) {
  EXPECT_EQ(max_abs(qgt_tensor(constant_family(), RealVector{{0.2}}, 1).h), 0.0);
  EXPECT_EQ(max_abs(finite_difference_qgt(constant_family(), RealVector{{0.2}}, 1).h), 0.0);
}

TEST(QgtTensor, RealFamiliesHaveNoImaginaryPart) {
  std::mt19937_64 rng(74);
  for (int t = 0; t < 5; ++t) {
    const HamiltonianFamily f = random_affine(rng, 4, 3, true);
    const QGTResult q = qgt_tensor(f, oracle::random_vector(rng, 3, -0.3, 0.3), 1);
    EXPECT_LE(q.h.imag().cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(min_eigenvalue(q.metric), -1e-10);
  }
}

TEST(QgtTensor, PsdAndHermitianOnRandomFamilies) {
  std::mt19937_64 rng(75);
  for (int t = 0; t < 10; ++t) {
    const HamiltonianFamily f = random_affine(rng, 5, 3, false);
    const QGTResult q = qgt_tensor(f, oracle::random_vector(rng, 3, -0.3, 0.3), t % 5);
    EXPECT_LE(hermiticity_defect(q.h), 1e-12);
    EXPECT_GE(min_eigenvalue(q.metric), -1e-10);
    EXPECT_LT((q.berry_form + q.berry_form.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(FiniteDifferenceQgt, AgreesWithSpectralFormula) {
  const HamiltonianFamily f = bloch_family();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const RealVector l{{0.3 + 0.6 * i, 0.5 + 1.2 * j}};
      EXPECT_LT(max_abs(ComplexMatrix(finite_difference_qgt(f, l, 0, 1e-5).h - qgt_tensor(f, l, 0).h)), 1e-6);
    }
}

TEST(FiniteDifferenceQgt, GaugeInvariant) {
  const RealVector l{{1.1, 0.7}};
  const QGTResult base = finite_difference_qgt(
      [](const RealVector& x) { return oracle::bloch_ground(x[0], x[1]); }, l, 1e-5);
  std::mt19937_64 rng(76);
  std::uniform_real_distribution<double> ph(0, 2 * M_PI);
  // a state map with random phases at every call
  auto scrambled = [&](const RealVector& x) { return ComplexVector(std::polar(1.0, ph(rng)) * oracle::bloch_ground(x[0], x[1])); };
  const QGTResult q = finite_difference_qgt(scrambled, l, 1e-5);
  EXPECT_LT(max_abs(ComplexMatrix(q.h - base.h)), 1e-8);
  EXPECT_NEAR(q.metric(0, 0), 0.25, 1e-8);
}

TEST(FiniteDifferenceQgt, RefusesLargeStepAndBadStep) {
  auto flip = [](const RealVector& x) {
    ComplexVector v(2);
    v << std::cos(x[0]), std::sin(x[0]);
    return v;
  };
  EXPECT_THROW(finite_difference_qgt(flip, RealVector{{0.0}}, 1.4), NumericalRefusal);
  EXPECT_THROW(finite_difference_qgt(flip, RealVector{{0.0}}, 0.0), InvalidArgument);
  EXPECT_NEAR(finite_difference_qgt(flip, RealVector{{0.0}}, 1e-5).h(0, 0).real(), 1.0, 1e-9);
}

TEST(OrbitConsistency, SpinsAndDirections) {
  for (double s : {0.5, 1.0, 1.5}) {
    const OrbitConsistency r = orbit_consistency_check(su2_spin_rep(s), RealVector::Unit(3, 2));
    EXPECT_EQ(r.points, 25);
    EXPECT_LE(r.metric_residual, 1e-8) << "s=" << s;
    EXPECT_LE(r.form_residual, 1e-8) << "s=" << s;
  }
  std::mt19937_64 rng(77);
  for (int t = 0; t < 3; ++t) {
    const RealVector n = oracle::random_vector(rng, 3, -1, 1).normalized();
    EXPECT_LE(orbit_consistency_check(su2_spin_rep(1.0), n).metric_residual, 1e-8);
  }
}

TEST(OrbitConsistency, SpinOneMetricIsTwiceSpinHalf) {
  const RealVector x{{0.4, 1.0, 2.0}};
  auto metric_for = [&](double s) {
    const LieAlgebraRep rep = su2_spin_rep(s);
    const ComplexMatrix h0 = -rep.generator(2);
    const Chart chart = Chart::su2_euler(FrameSide::left);
    const HamiltonianFamily f(3, [&](const RealVector& y) {
      const ComplexMatrix u = chart.element(rep, y);
      return ComplexMatrix(u * h0 * u.adjoint());
    });
    return qgt_tensor(f, x, 0).metric;
  };
  EXPECT_LT((metric_for(1.0) - 2.0 * metric_for(0.5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(OrbitConsistency, DegenerateDirectionRefused) {
  // n = 0 gives H0 = 0
  EXPECT_THROW(orbit_consistency_check(su2_spin_rep(0.5), RealVector::Zero(3)), NumericalRefusal);
  EXPECT_THROW(orbit_consistency_check(su2_spin_rep(0.5), RealVector::Zero(2)), DimensionError);
}
