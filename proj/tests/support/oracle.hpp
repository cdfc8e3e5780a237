#pragma once

// Brute-force reference sums for tests. Deliberately independent of the
// library's truncation and lattice enumeration: plain box sums over [-R, R]^g
// with a caller-chosen R, and Eigen only for arithmetic.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using IVector = Eigen::VectorXi;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Complex summand(const CVector& u, const CMatrix& B, const IVector& n) {
  const CVector nc = n.cast<double>().cast<Complex>();
  const Complex quad = (nc.transpose() * B * nc)(0, 0);
  const Complex lin = (nc.transpose() * u)(0, 0);
  return std::exp(kTwoPi * (-0.5 * quad + lin));
}

/// Calls f(n) for every n in the box [-R, R]^g.
inline void for_box(int g, int R, const std::function<void(const IVector&)>& f) {
  IVector n = IVector::Constant(g, -R);
  while (true) {
    f(n);
    int k = g - 1;
    while (k >= 0 && n(k) == R) n(k--) = -R;
    if (k < 0) break;
    ++n(k);
  }
}

/// sum_n weight(n) * summand(n) over the box.
inline Complex box_sum(const CVector& u, const CMatrix& B, int R,
                       const std::function<Complex(const IVector&)>& weight) {
  Complex total{0.0, 0.0};
  for_box(static_cast<int>(u.size()), R, [&](const IVector& n) { total += weight(n) * summand(u, B, n); });
  return total;
}

inline Complex theta(const CVector& u, const CMatrix& B, int R) {
  return box_sum(u, B, R, [](const IVector&) { return Complex{1.0, 0.0}; });
}

/// E[prod_i X_i^a_i] under the (possibly complex) pmf.
inline Complex moment(const CVector& u, const CMatrix& B, const std::vector<int>& a, int R) {
  auto mono = [&](const IVector& n) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(static_cast<double>(n(i)), a[i]);
    return Complex{v, 0.0};
  };
  return box_sum(u, B, R, mono) / theta(u, B, R);
}

inline CVector mean(const CVector& u, const CMatrix& B, int R) {
  const int g = static_cast<int>(u.size());
  CVector m(g);
  for (int i = 0; i < g; ++i) {
    std::vector<int> a(g, 0);
    a[i] = 1;
    m(i) = moment(u, B, a, R);
  }
  return m;
}

/// E[prod_i (X_i - mu_i)^a_i]
inline Complex central_moment(const CVector& u, const CMatrix& B, const std::vector<int>& a, int R) {
  const CVector mu = mean(u, B, R);
  auto mono = [&](const IVector& n) {
    Complex v{1.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (int k = 0; k < a[i]; ++k) v *= static_cast<double>(n(i)) - mu(i);
    }
    return v;
  };
  return box_sum(u, B, R, mono) / theta(u, B, R);
}

/// -sum p log p for real parameters.
inline double entropy(const CVector& u, const CMatrix& B, int R) {
  const double th = theta(u, B, R).real();
  double h = 0.0;
  for_box(static_cast<int>(u.size()), R, [&](const IVector& n) {
    const double p = summand(u, B, n).real() / th;
    if (p > 0.0) h -= p * std::log(p);
  });
  return h;
}

/// Random symmetric real matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(int g, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> E(lo, hi);
  Eigen::MatrixXd A(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A(i, j) = U(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd ev(g);
  for (int i = 0; i < g; ++i) ev(i) = E(rng);
  Eigen::MatrixXd S = Q * ev.asDiagonal() * Q.transpose();
  Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j) sym(j, i) = sym(i, j);
  return sym;
}

}  // namespace oracle
