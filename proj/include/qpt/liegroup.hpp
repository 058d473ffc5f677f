#pragma once

// Lie-algebra representations by Hermitian matrices, group elements, and
// coordinate coframes of invariant one-forms.
//
// Conventions used throughout:
//   closure    R_j R_k - R_k R_j = i c_r^{jk} R_r + i w_jk I
//   wedge      a^b := a(x)b - b(x)a           (no 1/2)
//   symmetric  a.b := a(x)b + b(x)a           (no 1/2)
//   SU(2)      R_j = 2 J_j, so spin 1/2 gives the Pauli matrices and c = 2 eps
//   Euler      U(a,b,g) = exp(i a R_3/2) exp(i b R_2/2) exp(i g R_3/2)
//
// A chart exponentiates i * scale * R_j; the coframe rows theta_j are dual to
// the algebra basis i * scale * R_j, so the Maurer-Cartan relation of a chart
// uses the structure constants scale * c (sign flipped for left frames).

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpt/hilbert.hpp"
#include "qpt/linalg.hpp"

namespace qpt {

// c_r^{jk}, stored densely.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  static StructureConstants levi_civita(double scale) {
    StructureConstants c(3);
    for (Index r = 0; r < 3; ++r) {
      c(r, (r + 1) % 3, (r + 2) % 3) = scale;
      c(r, (r + 2) % 3, (r + 1) % 3) = -scale;
    }
    return c;
  }

  Index size() const { return n_; }
  double& operator()(Index r, Index j, Index k) { return data_[flat(r, j, k)]; }
  double operator()(Index r, Index j, Index k) const { return data_[flat(r, j, k)]; }

  StructureConstants scaled(double s) const {
    StructureConstants out = *this;
    for (double& x : out.data_) x *= s;
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0; });
  }

  double antisymmetry_defect() const {
    double d = 0.0;
    for (Index r = 0; r < n_; ++r)
      for (Index j = 0; j < n_; ++j)
        for (Index k = 0; k < n_; ++k) d = std::max(d, std::abs((*this)(r, j, k) + (*this)(r, k, j)));
    return d;
  }

 private:
  std::size_t flat(Index r, Index j, Index k) const {
    return static_cast<std::size_t>((r * n_ + j) * n_ + k);
  }
  Index n_ = 0;
  std::vector<double> data_;
};

enum class Validation { checked, unchecked };

class LieAlgebraRep {
 public:
  // `closure_subspace`, when given, holds orthonormal columns spanning the
  // subspace on which the closure relation is required to hold (truncated
  // representations only satisfy it on low-lying states).
  LieAlgebraRep(std::string label, std::vector<ComplexMatrix> generators, StructureConstants c,
                std::optional<RealMatrix> multiplier_form = std::nullopt,
                std::optional<ComplexMatrix> closure_subspace = std::nullopt,
                Validation validation = Validation::checked)
      : label_(std::move(label)),
        generators_(std::move(generators)),
        c_(std::move(c)),
        omega_(std::move(multiplier_form)),
        closure_subspace_(std::move(closure_subspace)) {
    validate_shapes();
    closure_residual_ = compute_closure_residual();
    if (validation == Validation::checked) validate_values();
  }

  const std::string& label() const { return label_; }
  Index size() const { return static_cast<Index>(generators_.size()); }
  Index dim() const { return generators_.front().rows(); }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }
  const ComplexMatrix& generator(Index j) const { return generators_.at(static_cast<std::size_t>(j)); }
  const StructureConstants& structure_constants() const { return c_; }
  const std::optional<RealMatrix>& multiplier_form() const { return omega_; }
  const std::optional<ComplexMatrix>& closure_subspace() const { return closure_subspace_; }
  double closure_residual() const { return closure_residual_; }

  double omega(Index j, Index k) const { return omega_ ? (*omega_)(j, k) : 0.0; }

  // sum_j x^j R_j
  ComplexMatrix combination(const RealVector& x) const {
    require_same_dim(x.size(), size(), "LieAlgebraRep::combination");
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (Index j = 0; j < size(); ++j) out += x[j] * generators_[static_cast<std::size_t>(j)];
    return out;
  }

  // Copies for negative controls; closure is not re-validated.
  LieAlgebraRep with_structure_constants(StructureConstants c) const {
    return {label_, generators_, std::move(c), omega_, closure_subspace_, Validation::unchecked};
  }
  LieAlgebraRep without_multiplier() const {
    return {label_, generators_, c_, std::nullopt, closure_subspace_, Validation::unchecked};
  }

 private:
  void validate_shapes() const {
    if (generators_.empty()) throw InvalidArgument("LieAlgebraRep: at least one generator required");
    const Index d = generators_.front().rows();
    if (d < 1) throw DimensionError("LieAlgebraRep: representation dimension must be positive");
    for (const auto& g : generators_) {
      if (g.rows() != d || g.cols() != d) throw DimensionError("LieAlgebraRep: generators must share one square shape");
    }
    if (c_.size() != size()) throw DimensionError("LieAlgebraRep: structure constants do not match generator count");
    if (omega_ && (omega_->rows() != size() || omega_->cols() != size())) {
      throw DimensionError("LieAlgebraRep: multiplier form must be n x n");
    }
    if (closure_subspace_ && closure_subspace_->rows() != d) {
      throw DimensionError("LieAlgebraRep: closure subspace has wrong row count");
    }
  }

  void validate_values() const {
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      if (!is_hermitian(generators_[j])) {
        throw InvalidArgument("LieAlgebraRep: generator " + std::to_string(j) + " is not Hermitian");
      }
    }
    if (c_.antisymmetry_defect() > 1e-12) {
      throw InvalidArgument("LieAlgebraRep: structure constants are not antisymmetric in j,k");
    }
    if (omega_ && (*omega_ + omega_->transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InvalidArgument("LieAlgebraRep: multiplier form is not antisymmetric");
    }
    if (closure_residual_ > default_matrix_tolerance(dim())) {
      throw InvalidArgument("LieAlgebraRep: closure relation violated (residual " +
                            std::to_string(closure_residual_) + ")");
    }
  }

  double compute_closure_residual() const {
    const Index n = size();
    const Index d = dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    double worst = 0.0;
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        const auto& rj = generators_[static_cast<std::size_t>(j)];
        const auto& rk = generators_[static_cast<std::size_t>(k)];
        ComplexMatrix defect = rj * rk - rk * rj - kI * omega(j, k) * id;
        for (Index r = 0; r < n; ++r) {
          if (c_(r, j, k) != 0.0) defect -= kI * c_(r, j, k) * generators_[static_cast<std::size_t>(r)];
        }
        const ComplexMatrix restricted = closure_subspace_ ? ComplexMatrix(defect * *closure_subspace_) : defect;
        if (restricted.size() > 0) worst = std::max(worst, restricted.cwiseAbs().maxCoeff());
      }
    }
    return worst;
  }

  std::string label_;
  std::vector<ComplexMatrix> generators_;
  StructureConstants c_;
  std::optional<RealMatrix> omega_;
  std::optional<ComplexMatrix> closure_subspace_;
  double closure_residual_ = 0.0;
};

// ---------------------------------------------------------------------------
// Builtin representations

// Angular-momentum matrices J_1, J_2, J_3 of spin s in the basis m = s..-s.
inline std::vector<ComplexMatrix> angular_momentum_matrices(double s) {
  const double two_s = 2.0 * s;
  if (!(two_s >= 1.0) || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw InvalidArgument("spin must be a positive half-integer, got " + std::to_string(s));
  }
  const Index dim = static_cast<Index>(std::lround(two_s)) + 1;
  ComplexMatrix jp = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix jz = ComplexMatrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const double m = s - static_cast<double>(i);
    jz(i, i) = m;
    if (i > 0) jp(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));  // <m+1|J+|m>
  }
  const ComplexMatrix jm = jp.adjoint();
  return {0.5 * (jp + jm), (jp - jm) / (2.0 * kI), jz};
}

inline LieAlgebraRep su2_spin_rep(double s) {
  auto j = angular_momentum_matrices(s);
  for (auto& m : j) m *= 2.0;
  return {"su2", std::move(j), StructureConstants::levi_civita(2.0)};
}

namespace detail {

// Position and momentum quadratures Q = (a + a^dag)/sqrt2, P = i(a^dag - a)/sqrt2
// of one mode truncated to `cutoff` Fock levels.
inline std::pair<ComplexMatrix, ComplexMatrix> single_mode_quadratures(Index cutoff) {
  ComplexMatrix a = ComplexMatrix::Zero(cutoff, cutoff);
  for (Index k = 1; k < cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const ComplexMatrix ad = a.adjoint();
  return {(a + ad) / std::sqrt(2.0), kI * (ad - a) / std::sqrt(2.0)};
}

// Product-basis states whose occupations are all <= cutoff - 2: there the
// truncated commutator [Q, P] equals i exactly.
inline ComplexMatrix low_fock_subspace(Index modes, Index cutoff) {
  Index dim = 1;
  for (Index m = 0; m < modes; ++m) dim *= cutoff;
  std::vector<Index> keep;
  for (Index idx = 0; idx < dim; ++idx) {
    Index rest = idx;
    bool low = true;
    for (Index m = 0; m < modes; ++m) {
      if (rest % cutoff > cutoff - 2) low = false;
      rest /= cutoff;
    }
    if (low) keep.push_back(idx);
  }
  ComplexMatrix basis = ComplexMatrix::Zero(dim, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis(keep[c], static_cast<Index>(c)) = 1.0;
  return basis;
}

}  // namespace detail

inline RealMatrix standard_symplectic_form(Index modes) {
  RealMatrix w = RealMatrix::Zero(2 * modes, 2 * modes);
  w.topRightCorner(modes, modes) = RealMatrix::Identity(modes, modes);
  w.bottomLeftCorner(modes, modes) = -RealMatrix::Identity(modes, modes);
  return w;
}

// Abelian algebra R^{2n} with multiplier w = [[0, I], [-I, 0]], generators
// ordered (Q^1..Q^n, P^1..P^n) on the tensor product of truncated Fock spaces.
inline LieAlgebraRep heisenberg_rep(Index modes, Index cutoff) {
  if (modes < 1) throw InvalidArgument("heisenberg_rep: modes must be positive");
  if (cutoff < 3) throw InvalidArgument("heisenberg_rep: cutoff must be at least 3");
  const auto [q, p] = detail::single_mode_quadratures(cutoff);
  const ComplexMatrix id = ComplexMatrix::Identity(cutoff, cutoff);
  auto embed = [&](const ComplexMatrix& op, Index mode) {
    std::vector<ComplexMatrix> factors(static_cast<std::size_t>(modes), id);
    factors[static_cast<std::size_t>(mode)] = op;
    return kron(factors);
  };
  std::vector<ComplexMatrix> gens;
  for (Index m = 0; m < modes; ++m) gens.push_back(embed(q, m));
  for (Index m = 0; m < modes; ++m) gens.push_back(embed(p, m));
  return {"heisenberg", std::move(gens), StructureConstants(2 * modes), standard_symplectic_form(modes),
          detail::low_fock_subspace(modes, cutoff)};
}

// ---------------------------------------------------------------------------
// Group points, coframes, charts

struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  RealVector as_vector() const { return RealVector{{alpha, beta, gamma}}; }
  static EulerAngles from_vector(const RealVector& v) {
    require_same_dim(v.size(), 3, "EulerAngles");
    return {v[0], v[1], v[2]};
  }
};

struct ExponentialCoordinates {
  RealVector x;
};

using GroupPoint = std::variant<EulerAngles, ExponentialCoordinates>;

enum class FrameSide { right, left };

inline const char* to_string(FrameSide s) { return s == FrameSide::right ? "right" : "left"; }

// theta(j, a) = theta_j(d/dx^a) at `point`.
struct Coframe {
  RealMatrix theta;
  RealVector point;
  FrameSide side = FrameSide::right;
};

// Right-invariant forms of the Euler chart: dU U^-1 = i (R_j/2) theta_j.
inline Coframe su2_coframe(const EulerAngles& p) {
  const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
  const double sb = std::sin(p.beta), cb = std::cos(p.beta);
  RealMatrix t(3, 3);
  t << 0.0, sa, -sb * ca,
       0.0, ca, sb * sa,
       1.0, 0.0, cb;
  return {t, p.as_vector(), FrameSide::right};
}

// Left-invariant forms: U^-1 dU = i (R_j/2) theta_j.
inline Coframe su2_left_coframe(const EulerAngles& p) {
  const double sb = std::sin(p.beta), cb = std::cos(p.beta);
  const double sg = std::sin(p.gamma), cg = std::cos(p.gamma);
  RealMatrix t(3, 3);
  t << sb * cg, -sg, 0.0,
       sb * sg, cg, 0.0,
       cb, 0.0, 1.0;
  return {t, p.as_vector(), FrameSide::left};
}

namespace detail {

// phi(M) = sum_k M^k / (k+1)!
inline RealMatrix phi_series(const RealMatrix& m) {
  RealMatrix term = RealMatrix::Identity(m.rows(), m.cols());
  RealMatrix sum = term;
  for (int k = 1; k < 400; ++k) {
    term = term * m / static_cast<double>(k + 1);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * std::max(1.0, sum.cwiseAbs().maxCoeff())) return sum;
  }
  throw NumericalRefusal("exponential coframe: series did not converge");
}

}  // namespace detail

inline ComplexMatrix group_element(const LieAlgebraRep& rep, const GroupPoint& point) {
  return std::visit(
      [&](const auto& p) -> ComplexMatrix {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EulerAngles>) {
          if (rep.size() != 3) throw DimensionError("group_element: Euler coordinates need three generators");
          return exp_i_hermitian(rep.generator(2), 0.5 * p.alpha) * exp_i_hermitian(rep.generator(1), 0.5 * p.beta) *
                 exp_i_hermitian(rep.generator(2), 0.5 * p.gamma);
        } else {
          return exp_i_hermitian(rep.combination(p.x));
        }
      },
      point);
}

// A coordinate chart on the group: coframe field plus the map to group points.
class Chart {
 public:
  using CoframeFn = std::function<RealMatrix(const RealVector&)>;

  Chart(std::string name, std::vector<std::string> coordinates, double generator_scale, FrameSide side,
        CoframeFn coframe, std::function<GroupPoint(const RealVector&)> to_point,
        std::function<bool(const RealVector&, double)> degenerate)
      : name_(std::move(name)),
        coordinates_(std::move(coordinates)),
        scale_(generator_scale),
        side_(side),
        coframe_(std::move(coframe)),
        to_point_(std::move(to_point)),
        degenerate_(std::move(degenerate)) {}

  static Chart su2_euler(FrameSide side = FrameSide::right) {
    return Chart(
        "su2_euler", {"alpha", "beta", "gamma"}, 0.5, side,
        [side](const RealVector& x) {
          const auto p = EulerAngles::from_vector(x);
          return side == FrameSide::right ? su2_coframe(p).theta : su2_left_coframe(p).theta;
        },
        [](const RealVector& x) -> GroupPoint { return EulerAngles::from_vector(x); },
        [](const RealVector& x, double tol) { return std::abs(std::sin(x[1])) < tol; });
  }

  // Exponential coordinates U = exp(i x^j R_j). The coframe is
  // phi(+-ad_X) with phi(z) = (e^z - 1)/z; central terms (multiplier form)
  // do not enter.
  static Chart exponential(const LieAlgebraRep& rep, FrameSide side = FrameSide::right) {
    const StructureConstants c = rep.structure_constants();
    const Index n = rep.size();
    std::vector<std::string> names;
    for (Index j = 0; j < n; ++j) names.push_back("x" + std::to_string(j + 1));
    auto coframe = [c, n, side](const RealVector& x) {
      require_same_dim(x.size(), n, "exponential chart");
      RealMatrix ad = RealMatrix::Zero(n, n);  // ad_X on coefficients of the basis i R_k
      for (Index r = 0; r < n; ++r)
        for (Index k = 0; k < n; ++k)
          for (Index j = 0; j < n; ++j) ad(r, k) -= x[j] * c(r, j, k);
      return detail::phi_series(side == FrameSide::right ? ad : RealMatrix(-ad));
    };
    auto degenerate = [coframe](const RealVector& x, double tol) {
      Eigen::JacobiSVD<RealMatrix> svd(coframe(x));
      return svd.singularValues().minCoeff() < tol;
    };
    return Chart("exponential", std::move(names), 1.0, side, coframe,
                 [](const RealVector& x) -> GroupPoint { return ExponentialCoordinates{x}; }, degenerate);
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& coordinates() const { return coordinates_; }
  Index dimension() const { return static_cast<Index>(coordinates_.size()); }
  double generator_scale() const { return scale_; }
  FrameSide side() const { return side_; }

  Coframe coframe(const RealVector& x) const { return {coframe_(x), x, side_}; }
  GroupPoint point(const RealVector& x) const { return to_point_(x); }
  ComplexMatrix element(const LieAlgebraRep& rep, const RealVector& x) const { return group_element(rep, point(x)); }
  bool degenerate_at(const RealVector& x, double tol = 1e-8) const { return degenerate_(x, tol); }

  // Structure constants that enter d theta_r + 1/2 c_r^{jk} theta_j ^ theta_k = 0
  // for this chart's coframe.
  StructureConstants coframe_structure_constants(const StructureConstants& rep_constants) const {
    return rep_constants.scaled(side_ == FrameSide::right ? scale_ : -scale_);
  }

 private:
  std::string name_;
  std::vector<std::string> coordinates_;
  double scale_;
  FrameSide side_;
  CoframeFn coframe_;
  std::function<GroupPoint(const RealVector&)> to_point_;
  std::function<bool(const RealVector&, double)> degenerate_;
};

struct MaurerCartanResult {
  double residual = 0.0;
  bool chart_degenerate = false;
};

inline constexpr double kDefaultFdStep = 1e-5;

// max_r max_{a<b} |(d theta_r)_ab + sum_jk c_r^{jk} theta_j(a) theta_k(b)|,
// with d theta from central differences of the coframe components.
inline MaurerCartanResult maurer_cartan_residual(const LieAlgebraRep& rep, const Chart& chart, const RealVector& x,
                                                 double step = kDefaultFdStep) {
  if (!(step > 0.0)) throw InvalidArgument("maurer_cartan_residual: step must be positive");
  const Index m = chart.dimension();
  require_same_dim(x.size(), m, "maurer_cartan_residual");
  const RealMatrix theta = chart.coframe(x).theta;
  const Index n = theta.rows();
  require_same_dim(n, rep.size(), "maurer_cartan_residual");
  const StructureConstants c = chart.coframe_structure_constants(rep.structure_constants());

  std::vector<RealMatrix> dtheta;  // dtheta[a](j, b) = d theta_j(b) / dx^a
  for (Index a = 0; a < m; ++a) {
    RealVector xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    dtheta.push_back((chart.coframe(xp).theta - chart.coframe(xm).theta) / (2.0 * step));
  }

  MaurerCartanResult out;
  out.chart_degenerate = chart.degenerate_at(x);
  for (Index r = 0; r < n; ++r) {
    for (Index a = 0; a < m; ++a) {
      for (Index b = a + 1; b < m; ++b) {
        double v = dtheta[static_cast<std::size_t>(a)](r, b) - dtheta[static_cast<std::size_t>(b)](r, a);
        for (Index j = 0; j < n; ++j)
          for (Index k = 0; k < n; ++k) v += c(r, j, k) * theta(j, a) * theta(k, b);
        out.residual = std::max(out.residual, std::abs(v));
      }
    }
  }
  return out;
}

inline MaurerCartanResult maurer_cartan_residual(const LieAlgebraRep& rep, const EulerAngles& p,
                                                 double step = kDefaultFdStep) {
  return maurer_cartan_residual(rep, Chart::su2_euler(FrameSide::right), p.as_vector(), step);
}

// U(g) R_j U(g)^dag = sum_k matrix(k, j) R_k + central_shift[j] I.
// Column convention, so matrix(gh) = matrix(g) matrix(h).
struct AdjointAction {
  RealMatrix matrix;
  RealVector central_shift;
  double fit_residual = 0.0;
};

inline AdjointAction adjoint_matrix(const LieAlgebraRep& rep, const ComplexMatrix& u) {
  const Index n = rep.size();
  const Index d = rep.dim();
  require_same_dim(u.rows(), d, "adjoint_matrix");
  const bool central = rep.multiplier_form().has_value();
  const Index nb = central ? n + 1 : n;
  std::vector<ComplexMatrix> basis(rep.generators());
  if (central) basis.push_back(ComplexMatrix::Identity(d, d));

  RealMatrix gram(nb, nb);
  for (Index a = 0; a < nb; ++a)
    for (Index b = 0; b < nb; ++b)
      gram(a, b) = (basis[static_cast<std::size_t>(a)].adjoint() * basis[static_cast<std::size_t>(b)]).trace().real();
  const RealVector gev = real_symmetric_eigensystem(gram).values;
  if (gev.minCoeff() <= 1e-12 * gev.maxCoeff()) {
    throw InvalidArgument("adjoint_matrix: generators are not linearly independent");
  }
  const auto ldlt = gram.ldlt();

  AdjointAction out{RealMatrix(n, n), RealVector::Zero(n), 0.0};
  for (Index j = 0; j < n; ++j) {
    const ComplexMatrix conj = u * rep.generator(j) * u.adjoint();
    RealVector rhs(nb);
    for (Index a = 0; a < nb; ++a) rhs[a] = (basis[static_cast<std::size_t>(a)].adjoint() * conj).trace().real();
    const RealVector coef = ldlt.solve(rhs);
    ComplexMatrix fit = ComplexMatrix::Zero(d, d);
    for (Index a = 0; a < nb; ++a) fit += coef[a] * basis[static_cast<std::size_t>(a)];
    out.fit_residual = std::max(out.fit_residual, (conj - fit).cwiseAbs().maxCoeff());
    out.matrix.col(j) = coef.head(n);
    if (central) out.central_shift[j] = coef[n];
  }
  return out;
}

inline AdjointAction adjoint_matrix(const LieAlgebraRep& rep, const GroupPoint& point) {
  return adjoint_matrix(rep, group_element(rep, point));
}

}  // namespace qpt
