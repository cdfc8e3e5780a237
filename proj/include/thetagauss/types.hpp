#pragma once

// Core value types: Siegel matrices, theta arguments and multi-indices.
//
// Convention: theta(u, B) = sum_n e(-1/2 n^T B n + n^T u) with e(x) = exp(2 pi x),
// B symmetric with positive definite real part. The classical convention is
// recovered with z = -i u, tau = i B.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace thetagauss {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IVector = Eigen::VectorXi;
using IMatrix = Eigen::MatrixXi;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Smallest eigenvalue below which Re(B) is treated as degenerate.
inline constexpr double kMinRealEigenvalue = 1e-12;

/// Symmetric complex g x g matrix with positive definite real part.
class SiegelMatrix {
 public:
  explicit SiegelMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "B must be a non-empty square matrix");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
        if (entries_(i, j) != entries_(j, i)) {
          throw Error(ErrorCode::NotSymmetric, "B must be symmetric");
        }
      }
    }
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
      const Complex z = entries_.data()[i];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidArgument, "B has non-finite entries");
      }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(entries_.real(), Eigen::EigenvaluesOnly);
    lambda_min_ = eig.eigenvalues().minCoeff();
    if (!(lambda_min_ > kMinRealEigenvalue)) {
      throw Error(ErrorCode::NonPositiveDefinite, "Re(B) must be positive definite");
    }
  }

  static SiegelMatrix from_real(const RMatrix& real) { return SiegelMatrix(CMatrix(real.cast<Complex>())); }

  /// Symmetrizes (M + M^T) / 2 first; use for matrices produced by arithmetic.
  static SiegelMatrix symmetrized(const CMatrix& m) {
    CMatrix s = 0.5 * (m + m.transpose());
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < s.cols(); ++j) s(j, i) = s(i, j);
    }
    return SiegelMatrix(std::move(s));
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }
  double min_real_eigenvalue() const { return lambda_min_; }
  bool is_real() const { return entries_.imag().cwiseAbs().maxCoeff() == 0.0; }

 private:
  CMatrix entries_;
  double lambda_min_ = 0.0;
};

/// Argument (u, B) of theta.
class ThetaPoint {
 public:
  ThetaPoint(CVector u, SiegelMatrix B) : u_(std::move(u)), B_(std::move(B)) {
    if (u_.size() != B_.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "dim(u) must equal dim(B)");
    }
  }
  ThetaPoint(const RVector& u, const RMatrix& B)
      : ThetaPoint(CVector(u.cast<Complex>()), SiegelMatrix::from_real(B)) {}

  int dim() const { return B_.dim(); }
  const CVector& u() const { return u_; }
  const SiegelMatrix& B() const { return B_; }
  bool is_real() const { return B_.is_real() && u_.imag().cwiseAbs().maxCoeff() == 0.0; }

 private:
  CVector u_;
  SiegelMatrix B_;
};

/// Exponent vector a in N^g for derivatives, moments and cumulants.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> a) : a_(std::move(a)) {
    for (int ai : a_) {
      if (ai < 0) throw Error(ErrorCode::InvalidArgument, "multi-index entries must be >= 0");
    }
  }
  MultiIndex(std::initializer_list<int> a) : MultiIndex(std::vector<int>(a)) {}

  static MultiIndex zero(int g) { return MultiIndex(std::vector<int>(g, 0)); }
  static MultiIndex unit(int g, int i) {
    std::vector<int> a(g, 0);
    a[i] = 1;
    return MultiIndex(std::move(a));
  }

  int dim() const { return static_cast<int>(a_.size()); }
  int order() const { return std::accumulate(a_.begin(), a_.end(), 0); }
  int operator[](int i) const { return a_[i]; }
  const std::vector<int>& values() const { return a_; }

  MultiIndex operator+(const MultiIndex& o) const {
    std::vector<int> r(a_);
    for (int i = 0; i < dim(); ++i) r[i] += o.a_[i];
    return MultiIndex(std::move(r));
  }
  MultiIndex operator-(const MultiIndex& o) const {
    std::vector<int> r(a_);
    for (int i = 0; i < dim(); ++i) r[i] -= o.a_[i];
    return MultiIndex(std::move(r));
  }
  /// Componentwise a <= b.
  bool le(const MultiIndex& o) const {
    for (int i = 0; i < dim(); ++i) {
      if (a_[i] > o.a_[i]) return false;
    }
    return true;
  }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim(); ++i) s += (i ? "," : "") + std::to_string(a_[i]);
    return s + ")";
  }

 private:
  std::vector<int> a_;
};

/// All b <= a, in lexicographic order.
inline std::vector<MultiIndex> indices_below(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  std::vector<int> b(a.dim(), 0);
  while (true) {
    out.emplace_back(b);
    int k = a.dim() - 1;
    while (k >= 0 && b[k] == a[k]) b[k--] = 0;
    if (k < 0) break;
    ++b[k];
  }
  return out;
}

/// Monomials of exactly degree d in g variables, graded-lex (x1^d first).
inline std::vector<MultiIndex> indices_of_degree(int g, int d) {
  std::vector<MultiIndex> out;
  std::vector<int> a(g, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == g - 1) {
      a[pos] = remaining;
      out.emplace_back(a);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      a[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

/// Every multi-index with |a| <= max_order, degree by degree.
inline std::vector<MultiIndex> indices_up_to(int g, int max_order) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_order; ++d) {
    auto layer = indices_of_degree(g, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// prod_i C(a_i, b_i)
inline double multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  double r = 1.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int k = 0; k < b[i]; ++k) r *= static_cast<double>(a[i] - k) / static_cast<double>(k + 1);
  }
  return r;
}

/// v^a for a complex vector.
inline Complex power(const CVector& v, const MultiIndex& a) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < a.dim(); ++i) {
    for (int k = 0; k < a[i]; ++k) r *= v(i);
  }
  return r;
}

}  // namespace thetagauss
