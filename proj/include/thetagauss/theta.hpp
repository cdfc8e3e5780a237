#pragma once

// Riemann theta function and its derivatives by truncated lattice summation.

#include <memory>

#include "lattice.hpp"

namespace thetagauss {

/// Raw lattice sums S_a = sum_n n^a e(-1/2 n^T B n + n^T u) for every |a| <= max_order.
/// D^a_u theta = (2 pi)^|a| S_a (mixed partials).
class ThetaSums {
 public:
  ThetaSums(const ThetaPoint& p, int max_order, double eps)
      : g_(p.dim()), max_order_(max_order), indices_(indices_up_to(p.dim(), max_order)) {
    budget_ = truncation_radius(p.B(), p.u(), max_order, eps);
    const auto ball = LatticeBall::get(g_, static_cast<int>(budget_.radius));
    budget_.shell_count = ball->shell_count();
    values_.assign(indices_.size(), Complex{0.0, 0.0});
    abs_sum_ = 0.0;

    const CMatrix& B = p.B().entries();
    const CVector& u = p.u();
    // powers[i * (K+1) + k] = n_i^k
    std::vector<double> powers(static_cast<std::size_t>(g_) * (max_order + 1));
    for (std::size_t k = 0; k < ball->size(); ++k) {
      const int* n = ball->point(k);
      Complex quad{0.0, 0.0};
      Complex lin{0.0, 0.0};
      for (int i = 0; i < g_; ++i) {
        if (n[i] == 0) continue;
        Complex row{0.0, 0.0};
        for (int j = 0; j < g_; ++j) {
          if (n[j] != 0) row += B(i, j) * static_cast<double>(n[j]);
        }
        quad += static_cast<double>(n[i]) * row;
        lin += static_cast<double>(n[i]) * u(i);
      }
      const Complex term = std::exp(kTwoPi * (-0.5 * quad + lin));
      abs_sum_ += std::abs(term);
      for (int i = 0; i < g_; ++i) {
        double v = 1.0;
        for (int e = 0; e <= max_order; ++e) {
          powers[static_cast<std::size_t>(i) * (max_order + 1) + e] = v;
          v *= n[i];
        }
      }
      for (std::size_t idx = 0; idx < indices_.size(); ++idx) {
        double mono = 1.0;
        const auto& a = indices_[idx].values();
        for (int i = 0; i < g_; ++i) mono *= powers[static_cast<std::size_t>(i) * (max_order + 1) + a[i]];
        if (mono != 0.0) values_[idx] += mono * term;
      }
    }
  }

  int dim() const { return g_; }
  int max_order() const { return max_order_; }
  const TruncationBudget& budget() const { return budget_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// S_a; a must satisfy |a| <= max_order().
  Complex sum(const MultiIndex& a) const { return values_[position(a)]; }
  Complex theta() const { return values_[0]; }
  /// D^a_u theta
  Complex derivative(const MultiIndex& a) const {
    return std::pow(kTwoPi, a.order()) * sum(a);
  }
  /// sum_n |summand|; scale of the cancellation in theta.
  double abs_sum() const { return abs_sum_; }

 private:
  std::size_t position(const MultiIndex& a) const {
    if (a.dim() != g_ || a.order() > max_order_) {
      throw Error(ErrorCode::InvalidArgument, "multi-index " + a.str() + " outside the computed jet");
    }
    // indices_ is sorted by degree and, within a degree, descending lex.
    auto it = std::lower_bound(indices_.begin(), indices_.end(), a,
                               [](const MultiIndex& x, const MultiIndex& y) {
                                 if (x.order() != y.order()) return x.order() < y.order();
                                 return x > y;
                               });
    return static_cast<std::size_t>(it - indices_.begin());
  }

  int g_;
  int max_order_;
  std::vector<MultiIndex> indices_;
  std::vector<Complex> values_;
  TruncationBudget budget_;
  double abs_sum_ = 0.0;
};

inline Complex theta(const ThetaPoint& p, double eps) { return ThetaSums(p, 0, eps).theta(); }

/// eps scaled by the bound on the largest summand, so that tolerances stay
/// relative when Re(u) is large.
inline double scaled_tolerance(const ThetaPoint& p, double eps) {
  // |summand(n)| <= exp(pi x^T (Re B)^-1 x), x = Re u, the maximum of the real quadratic.
  const RVector x = p.u().real();
  const RMatrix re = p.B().entries().real();
  const double q = std::max(0.0, x.dot(re.llt().solve(x)));
  const double log_scale = std::min(kPi * q, 600.0);
  return std::max(eps * std::max(1.0, std::exp(log_scale)), kEpsFloor);
}

/// Mixed partial d^|a| theta / du_1^a_1 ... du_g^a_g.
inline Complex theta_du(const MultiIndex& a, const ThetaPoint& p, double eps) {
  if (a.dim() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "dim(a) != g");
  return ThetaSums(p, a.order(), eps).derivative(a);
}

/// d theta / dB_ij (0-based, i <= j) through the heat equation; for i < j the
/// entries B_ij and B_ji move together.
inline Complex theta_dB(int i, int j, const ThetaSums& sums) {
  const int g = sums.dim();
  if (i < 0 || j < i || j >= g) throw Error(ErrorCode::InvalidArgument, "need 0 <= i <= j < g");
  const Complex d2 = sums.derivative(MultiIndex::unit(g, i) + MultiIndex::unit(g, j));
  return i == j ? -d2 / (2.0 * kTwoPi) : -d2 / kTwoPi;
}

inline Complex theta_dB(int i, int j, const ThetaPoint& p, double eps) {
  return theta_dB(i, j, ThetaSums(p, 2, eps));
}

}  // namespace thetagauss
