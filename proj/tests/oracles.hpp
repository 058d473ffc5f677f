#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's numerics: exponentials are closed forms or Taylor series,
// eigenvectors are closed forms, and moments are ladder-operator products.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr C I{0.0, 1.0};

inline CMat pauli(int j) {
  CMat s(2, 2);
  if (j == 1) s << 0, 1, 1, 0;
  if (j == 2) s << 0, -I, I, 0;
  if (j == 3) s << 1, 0, 0, -1;
  return s;
}

// exp(i t (a . sigma)) = cos(t|a|) + i sin(t|a|) (a/|a|) . sigma
inline CMat expi_pauli(const RVec& a, double t = 1.0) {
  const double r = a.norm();
  CMat out = std::cos(t * r) * CMat::Identity(2, 2);
  if (r == 0.0) return out;
  for (int j = 0; j < 3; ++j) out += I * std::sin(t * r) * (a[j] / r) * pauli(j + 1);
  return out;
}

// Scaling-and-squaring Taylor exponential of an arbitrary square matrix.
inline CMat expm_taylor(const CMat& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const CMat x = a * scale;
  CMat term = CMat::Identity(a.rows(), a.cols());
  CMat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

// SU(2) spin-1/2 Euler product exp(i a s3/2) exp(i b s2/2) exp(i g s3/2).
inline CMat euler_su2(double a, double b, double g) {
  return expi_pauli(RVec{{0, 0, a / 2}}) * expi_pauli(RVec{{0, b / 2, 0}}) * expi_pauli(RVec{{0, 0, g / 2}});
}

// theta_j(d/dx^a) from dU U^dag = i (sigma_j / 2) theta_j, via central
// differences of the closed-form group element.
inline RMat right_coframe_fd(double a, double b, double g, double h = 1e-6) {
  RMat th(3, 3);
  const double x[3] = {a, b, g};
  for (int c = 0; c < 3; ++c) {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[c] += h;
    xm[c] -= h;
    const CMat du = (euler_su2(xp[0], xp[1], xp[2]) - euler_su2(xm[0], xm[1], xm[2])) / (2 * h);
    const CMat m = du * euler_su2(a, b, g).adjoint();
    for (int j = 0; j < 3; ++j) th(j, c) = (-I * (pauli(j + 1) * m).trace()).real();
  }
  return th;
}

// Spin-s angular momentum matrices J_x, J_y, J_z in the basis m = s, s-1, ..., -s,
// built from <m+1|J+|m> = sqrt(s(s+1) - m(m+1)).
inline std::vector<CMat> spin_matrices(double s) {
  const int d = static_cast<int>(std::lround(2 * s)) + 1;
  CMat jp = CMat::Zero(d, d), jz = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = s - i;
    jz(i, i) = m;
    if (i > 0) jp(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const CMat jm = jp.adjoint();
  return {(jp + jm) / 2.0, (jp - jm) / (2.0 * I), jz};
}

// Truncated annihilation operator a|k> = sqrt(k)|k-1>.
inline CMat annihilation(int cutoff) {
  CMat a = CMat::Zero(cutoff, cutoff);
  for (int k = 1; k < cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Brute-force <psi| A B |psi> with explicit loops.
inline C sandwich(const CVec& psi, const CMat& a, const CMat& b) {
  C acc = 0.0;
  for (int i = 0; i < psi.size(); ++i)
    for (int j = 0; j < psi.size(); ++j)
      for (int k = 0; k < psi.size(); ++k) acc += std::conj(psi[i]) * a(i, j) * b(j, k) * psi[k];
  return acc;
}

// Ground state of n(theta, phi) . sigma (eigenvalue -1), smooth in theta on (0, pi).
inline CVec bloch_ground(double theta, double phi) {
  CVec v(2);
  v << std::sin(theta / 2), -std::polar(1.0, phi) * std::cos(theta / 2);
  return v;
}

// Ground state of lambda s3 + delta s1, closed form.
inline CVec lz_ground(double lambda, double delta) {
  const double t = std::atan2(delta, lambda);
  return bloch_ground(t, 0.0);
}

// h_mn = <d_m psi|d_n psi> - <psi|d_n psi><d_m psi|psi> with central
// differences of a smooth-gauge closed-form state.
template <class F>
CMat qgt_of_smooth_state(const F& state, const RVec& x, double h = 1e-5) {
  const int m = static_cast<int>(x.size());
  const CVec psi = state(x);
  std::vector<CVec> d;
  for (int a = 0; a < m; ++a) {
    RVec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    d.push_back((state(xp) - state(xm)) / (2 * h));
  }
  CMat q(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) q(a, b) = d[a].dot(d[b]) - psi.dot(d[b]) * d[a].dot(psi);
  return q;
}

inline RVec random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  RVec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline CVec random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = C(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace oracle
