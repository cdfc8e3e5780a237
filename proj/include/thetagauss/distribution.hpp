#pragma once

// Discrete Gaussian distributions on Z^g:
//   p(n) = e(-1/2 n^T B n + n^T u) / theta(u, B),   e(x) = exp(2 pi x).
// Parameters may be complex; expectations are then lattice sums weighted by
// the complex pmf.

#include <map>
#include <optional>

#include "theta.hpp"

namespace thetagauss {

class DiscreteGaussian {
 public:
  static constexpr double kDefaultEps = 1e-13;

  explicit DiscreteGaussian(ThetaPoint point, double eps = kDefaultEps)
      : point_(std::move(point)), eps_(eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    working_eps_ = scaled_tolerance(point_, eps_);
    const ThetaSums sums(point_, 0, working_eps_);
    theta_ = sums.theta();
    budget_ = sums.budget();
    if (!(std::abs(theta_) > 10.0 * working_eps_)) {
      throw Error(ErrorCode::DivisorHit, "theta(u, B) vanishes to working precision");
    }
  }

  DiscreteGaussian(const CVector& u, const CMatrix& B, double eps = kDefaultEps)
      : DiscreteGaussian(ThetaPoint(u, SiegelMatrix(B)), eps) {}

  int dim() const { return point_.dim(); }
  const ThetaPoint& point() const { return point_; }
  const CVector& u() const { return point_.u(); }
  const CMatrix& B() const { return point_.B().entries(); }
  Complex theta_value() const { return theta_; }
  double eps() const { return eps_; }
  /// Absolute tolerance handed to the theta engine.
  double working_eps() const { return working_eps_; }
  const TruncationBudget& budget() const { return budget_; }
  bool is_real() const { return point_.is_real(); }

  /// Exponent 2 pi (-1/2 n^T B n + n^T u) of the unnormalised weight.
  Complex log_weight(const IVector& n) const {
    if (n.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "dim(n) != g");
    const CVector nc = n.cast<double>().cast<Complex>();
    const Complex quad = (nc.transpose() * B() * nc)(0, 0);
    const Complex lin = (nc.transpose() * u())(0, 0);
    return kTwoPi * (-0.5 * quad + lin);
  }

 private:
  ThetaPoint point_;
  double eps_;
  double working_eps_ = 0.0;
  Complex theta_;
  TruncationBudget budget_;
};

inline Complex pmf(const DiscreteGaussian& d, const IVector& n) {
  return std::exp(d.log_weight(n)) / d.theta_value();
}

/// E[exp(i v^T X)] = theta(u + i v / 2pi, B) / theta(u, B). The numerator may vanish.
inline Complex char_fn(const DiscreteGaussian& d, const RVector& v) {
  if (v.size() != d.dim()) throw Error(ErrorCode::DimensionMismatch, "dim(v) != g");
  const CVector shifted = d.u() + kI * v.cast<Complex>() / kTwoPi;
  return theta(ThetaPoint(shifted, d.point().B()), d.working_eps()) / d.theta_value();
}

/// Raw moments mu_a, central moments m_a and cumulants kappa_a for all |a| <= order.
class MomentTable {
 public:
  MomentTable(const DiscreteGaussian& d, int order) : g_(d.dim()), order_(order) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "moment order must be >= 0");
    const ThetaSums sums(d.point(), order, d.working_eps());
    const Complex s0 = d.theta_value();
    const auto all = indices_up_to(g_, order);
    for (const auto& a : all) raw_[a] = a.order() == 0 ? Complex{1.0, 0.0} : sums.sum(a) / s0;

    mean_ = CVector::Zero(g_);
    if (order >= 1) {
      for (int i = 0; i < g_; ++i) mean_(i) = raw_.at(MultiIndex::unit(g_, i));
    }
    const CVector neg_mean = -mean_;
    for (const auto& a : all) {
      Complex m{0.0, 0.0};
      for (const auto& b : indices_below(a)) {
        m += multi_binomial(a, b) * power(neg_mean, b) * raw_.at(a - b);
      }
      central_[a] = m;
    }
    // kappa of the centred variable; only the first cumulant feels the shift.
    std::map<MultiIndex, Complex> centred;
    for (const auto& a : all) {
      if (a.order() == 0) continue;
      if (a.order() == 1) {
        centred[a] = 0.0;
        continue;
      }
      int j = 0;
      while (a[j] == 0) ++j;
      const MultiIndex ej = MultiIndex::unit(g_, j);
      const MultiIndex ap = a - ej;
      Complex k = central_.at(a);
      for (const auto& b : indices_below(ap)) {
        if (b == ap) continue;
        k -= multi_binomial(ap, b) * centred.at(b + ej) * central_.at(ap - b);
      }
      centred[a] = k;
    }
    for (const auto& [a, k] : centred) cumulant_[a] = a.order() == 1 ? raw_.at(a) : k;
  }

  int dim() const { return g_; }
  int order() const { return order_; }
  Complex moment(const MultiIndex& a) const { return lookup(raw_, a); }
  Complex central(const MultiIndex& a) const { return lookup(central_, a); }
  Complex cumulant(const MultiIndex& a) const {
    if (a.order() == 0) throw Error(ErrorCode::InvalidArgument, "cumulants need |a| >= 1");
    return lookup(cumulant_, a);
  }
  const CVector& mean() const { return mean_; }

 private:
  Complex lookup(const std::map<MultiIndex, Complex>& table, const MultiIndex& a) const {
    if (a.dim() != g_) throw Error(ErrorCode::DimensionMismatch, "dim(a) != g");
    auto it = table.find(a);
    if (it == table.end()) {
      throw Error(ErrorCode::InvalidArgument, "multi-index " + a.str() + " above the table order");
    }
    return it->second;
  }

  int g_;
  int order_;
  CVector mean_;
  std::map<MultiIndex, Complex> raw_;
  std::map<MultiIndex, Complex> central_;
  std::map<MultiIndex, Complex> cumulant_;
};

inline Complex moment(const DiscreteGaussian& d, const MultiIndex& a) {
  return MomentTable(d, a.order()).moment(a);
}
inline Complex central_moment(const DiscreteGaussian& d, const MultiIndex& a) {
  return MomentTable(d, a.order()).central(a);
}
inline Complex cumulant(const DiscreteGaussian& d, const MultiIndex& a) {
  return MomentTable(d, a.order()).cumulant(a);
}

struct MeanCov {
  CVector mean;
  CMatrix cov;
};

inline MeanCov mean_cov(const DiscreteGaussian& d) {
  const MomentTable t(d, 2);
  const int g = d.dim();
  CMatrix cov(g, g);
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g; ++j) {
      cov(i, j) = t.central(MultiIndex::unit(g, i) + MultiIndex::unit(g, j));
      cov(j, i) = cov(i, j);
    }
  }
  return {t.mean(), cov};
}

struct EntropyResult {
  Complex value;
  /// Set for complex parameters, where log theta is taken on the principal branch.
  bool branch_ambiguous = false;
};

/// log theta - 2 pi <u, mu> + pi <B, Sigma + mu mu^T> (entrywise pairing, no conjugation).
inline EntropyResult entropy(const DiscreteGaussian& d) {
  const auto [mu, cov] = mean_cov(d);
  const CMatrix second = cov + mu * mu.transpose();
  const Complex pairing = d.B().cwiseProduct(second).sum();
  const Complex lin = (d.u().transpose() * mu)(0, 0);
  const Complex value = std::log(d.theta_value()) - kTwoPi * lin + kPi * pairing;
  return {value, !d.is_real()};
}

/// Split Z^g = Z^g1 x Z^(g - g1).
struct SplitSpec {
  int g1;
  void validate(int g) const {
    if (g1 < 1 || g1 >= g) throw Error(ErrorCode::InvalidArgument, "split needs 1 <= g1 < g");
  }
};

/// P(X_1 = n1) = e(-1/2 n1^T B11 n1 + n1^T u1) theta(u2 - B12^T n1, B22) / theta(u, B).
inline Complex marginal_pmf(const DiscreteGaussian& d, const SplitSpec& s, const IVector& n1) {
  const int g = d.dim();
  s.validate(g);
  if (n1.size() != s.g1) throw Error(ErrorCode::DimensionMismatch, "dim(n1) != g1");
  const int g2 = g - s.g1;
  const CMatrix& B = d.B();
  const CVector n1c = n1.cast<double>().cast<Complex>();
  const CMatrix B11 = B.topLeftCorner(s.g1, s.g1);
  const CMatrix B12 = B.topRightCorner(s.g1, g2);
  const CVector u1 = d.u().head(s.g1);
  const CVector u2 = d.u().tail(g2) - B12.transpose() * n1c;
  const Complex head = kTwoPi * (-0.5 * (n1c.transpose() * B11 * n1c)(0, 0) + (n1c.transpose() * u1)(0, 0));
  const ThetaPoint rest(u2, SiegelMatrix(CMatrix(B.bottomRightCorner(g2, g2))));
  return std::exp(head) * theta(rest, d.working_eps()) / d.theta_value();
}

/// Point (u + i m + B n, B): the law of X + n.
inline DiscreteGaussian translate(const DiscreteGaussian& d, const IVector& m, const IVector& n) {
  if (m.size() != d.dim() || n.size() != d.dim()) throw Error(ErrorCode::DimensionMismatch, "dim != g");
  const CVector u = d.u() + kI * m.cast<double>().cast<Complex>() + d.B() * n.cast<double>().cast<Complex>();
  return DiscreteGaussian(ThetaPoint(u, d.point().B()), d.eps());
}

inline long integer_determinant(const IMatrix& a) {
  return std::lround(a.cast<double>().determinant());
}

/// Point (alpha^-T u, alpha^-T B alpha^-1): the law of alpha X.
inline DiscreteGaussian unimodular(const DiscreteGaussian& d, const IMatrix& alpha) {
  const int g = d.dim();
  if (alpha.rows() != g || alpha.cols() != g) throw Error(ErrorCode::DimensionMismatch, "alpha must be g x g");
  if (std::abs(integer_determinant(alpha)) != 1) {
    throw Error(ErrorCode::NotUnimodular, "alpha must have determinant +-1");
  }
  // The inverse of a unimodular matrix is integral; rounding removes LU noise.
  const RMatrix inv = alpha.cast<double>().inverse().array().round().matrix();
  const CMatrix inv_t = inv.transpose().cast<Complex>();
  const CVector u = inv_t * d.u();
  const CMatrix B = inv_t * d.B() * inv_t.transpose();
  return DiscreteGaussian(ThetaPoint(u, SiegelMatrix::symmetrized(B)), d.eps());
}

/// Element (a, beta) of N_g = Z^g x Sym_g(Z), acting by
/// (u, B) -> (u + i a + i/2 diag(beta), B - i beta).
struct NgWitness {
  IVector a;
  IMatrix beta;
};

inline CVector apply_ng_u(const CVector& u, const NgWitness& w) {
  return u + kI * (w.a.cast<double>() + 0.5 * w.beta.diagonal().cast<double>()).cast<Complex>();
}
inline CMatrix apply_ng_B(const CMatrix& B, const NgWitness& w) {
  return B - kI * w.beta.cast<double>().cast<Complex>();
}

struct Canonical {
  DiscreteGaussian dist;
  NgWitness witness;
};

/// Representative with Im(B) and Im(u) entrywise in [0, 1); pmf is unchanged.
inline Canonical canonicalize(const DiscreteGaussian& d) {
  const int g = d.dim();
  NgWitness w{IVector::Zero(g), IMatrix::Zero(g, g)};
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g; ++j) {
      w.beta(i, j) = static_cast<int>(std::floor(d.B()(i, j).imag()));
      w.beta(j, i) = w.beta(i, j);
    }
  }
  for (int k = 0; k < g; ++k) {
    w.a(k) = -static_cast<int>(std::floor(d.u()(k).imag() + 0.5 * w.beta(k, k)));
  }
  if (w.a.isZero() && w.beta.isZero()) return {d, w};
  CMatrix B = apply_ng_B(d.B(), w);
  CVector u = apply_ng_u(d.u(), w);
  // Rounding can leave an imaginary part a hair below 0 or at 1.
  for (int k = 0; k < g; ++k) {
    const double im = u(k).imag();
    if (im < 0.0 || im >= 1.0) u(k) = Complex(u(k).real(), im - std::floor(im));
  }
  return {DiscreteGaussian(ThetaPoint(u, SiegelMatrix(B)), d.eps()), w};
}

inline constexpr double kSameDistributionTol = 1e-10;

inline bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) < tol; }

/// True when the two parameter points lie in one N_g orbit.
inline bool same_distribution(const DiscreteGaussian& d1, const DiscreteGaussian& d2) {
  if (d1.dim() != d2.dim()) throw Error(ErrorCode::DimensionMismatch, "distributions differ in g");
  const double tol = kSameDistributionTol;
  const int g = d1.dim();
  if ((d1.B().real() - d2.B().real()).cwiseAbs().maxCoeff() >= tol) return false;
  if ((d1.u().real() - d2.u().real()).cwiseAbs().maxCoeff() >= tol) return false;
  const RMatrix dB = d1.B().imag() - d2.B().imag();
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g; ++j) {
      if (!near_integer(dB(i, j), tol)) return false;
    }
  }
  for (int k = 0; k < g; ++k) {
    const double shift = d1.u()(k).imag() - d2.u()(k).imag() + 0.5 * std::round(dB(k, k));
    if (!near_integer(shift, tol)) return false;
  }
  return true;
}

/// True when X_1 and X_2 are independent, i.e. B12 lies in i Z entrywise.
inline bool is_independent_split(const DiscreteGaussian& d, const SplitSpec& s) {
  s.validate(d.dim());
  const CMatrix B12 = d.B().topRightCorner(s.g1, d.dim() - s.g1);
  for (Eigen::Index k = 0; k < B12.size(); ++k) {
    const Complex z = B12.data()[k];
    if (std::abs(z.real()) >= kSameDistributionTol || !near_integer(z.imag(), kSameDistributionTol)) {
      return false;
    }
  }
  return true;
}

/// Laws of the two blocks of an independent split, after canonicalisation.
inline std::pair<DiscreteGaussian, DiscreteGaussian> split_blocks(const DiscreteGaussian& d,
                                                                 const SplitSpec& s) {
  if (!is_independent_split(d, s)) throw Error(ErrorCode::InvalidArgument, "split is not independent");
  const auto c = canonicalize(d).dist;
  const int g2 = d.dim() - s.g1;
  CMatrix B11 = c.B().topLeftCorner(s.g1, s.g1);
  CMatrix B22 = c.B().bottomRightCorner(g2, g2);
  return {DiscreteGaussian(ThetaPoint(CVector(c.u().head(s.g1)), SiegelMatrix(B11)), d.eps()),
          DiscreteGaussian(ThetaPoint(CVector(c.u().tail(g2)), SiegelMatrix(B22)), d.eps())};
}

}  // namespace thetagauss
