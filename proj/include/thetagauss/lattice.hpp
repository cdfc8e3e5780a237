#pragma once

// Certified truncation of lattice sums over Z^g and deterministic enumeration
// of the truncated support.

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "types.hpp"

namespace thetagauss {

/// Absolute tolerances below this cannot be certified in double precision.
inline constexpr double kEpsFloor = 1e-14;
inline constexpr int kDefaultMaxRadius = 10000;

/// Hard cap on the truncation radius; THETA_GAUSS_MAX_RADIUS overrides it.
inline int max_radius() {
  if (const char* env = std::getenv("THETA_GAUSS_MAX_RADIUS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1000000) return static_cast<int>(v);
  }
  return kDefaultMaxRadius;
}

struct TruncationBudget {
  double eps = 0.0;
  double radius = 0.0;     ///< keep lattice points with ||n|| <= radius
  int shell_count = 0;     ///< number of distinct ||n||^2 values kept
  double tail_bound = 0.0; ///< certified bound on the discarded tail, < eps
};

namespace detail {

inline double log_sum_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// Number of lattice points with s < ||n||_2 <= s + 1, bounded through the
/// sup norm: such points satisfy ||n||_inf <= s + 1 and ||n||_inf > k_in where
/// k_in is the largest integer with g * k_in^2 <= s^2.
inline double log_annulus_count(int g, long s) {
  long k_in = static_cast<long>(std::floor(static_cast<double>(s) / std::sqrt(static_cast<double>(g))));
  while (static_cast<double>(g) * static_cast<double>((k_in + 1) * (k_in + 1)) <=
         static_cast<double>(s * s)) {
    ++k_in;
  }
  while (k_in > 0 && static_cast<double>(g) * static_cast<double>(k_in * k_in) >
                         static_cast<double>(s * s)) {
    --k_in;
  }
  const double outer = std::pow(2.0 * static_cast<double>(s + 1) + 1.0, g);
  const double inner = std::pow(2.0 * static_cast<double>(k_in) + 1.0, g);
  return std::log(std::max(outer - inner, 1.0));
}

}  // namespace detail

/// Log of the tail bound sum_{||n|| > R} (2 pi ||n||)^order exp(2 pi(-lambda/2 ||n||^2 + rho ||n||)).
inline double log_tail_bound(int g, double lambda_min, double rho, int order, long R) {
  // envelope maximiser r* of order*log(2 pi r) + 2 pi(-lambda r^2 / 2 + rho r)
  const double r_star =
      (kTwoPi * rho + std::sqrt(kTwoPi * kTwoPi * rho * rho + 4.0 * kTwoPi * lambda_min * order)) /
      (2.0 * kTwoPi * lambda_min);
  auto log_env = [&](double r) {
    const double poly = order > 0 ? order * std::log(kTwoPi * r) : 0.0;
    return poly + kTwoPi * (-0.5 * lambda_min * r * r + rho * r);
  };
  double total = -INFINITY;
  double prev = INFINITY;
  for (long s = R;; ++s) {
    const double sd = static_cast<double>(s);
    const double r = std::clamp(r_star, std::max(sd, 1e-300), sd + 1.0);
    const double term = detail::log_annulus_count(g, s) + log_env(r);
    total = detail::log_sum_exp(total, term);
    // Past the envelope peak the terms decay super-geometrically; once the
    // ratio is below 1/2 the remainder is bounded by the last term.
    if (sd > r_star + 1.0 && term - prev < std::log(0.5) && term < total - 40.0) {
      total = detail::log_sum_exp(total, term);
      break;
    }
    prev = term;
  }
  return total;
}

/// Smallest integer radius R >= 1 whose certified tail is below eps.
inline TruncationBudget truncation_radius(const SiegelMatrix& B, const CVector& u, int order,
                                          double eps, int cap = max_radius()) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (eps < kEpsFloor) {
    throw Error(ErrorCode::ToleranceTooTight, "eps below the double-precision floor 1e-14");
  }
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
  if (u.size() != B.dim()) throw Error(ErrorCode::DimensionMismatch, "dim(u) != dim(B)");
  const double lambda = B.min_real_eigenvalue();
  if (!(lambda > kMinRealEigenvalue)) {
    throw Error(ErrorCode::NonPositiveDefinite, "Re(B) must be positive definite");
  }
  const double rho = u.real().norm();
  const double log_eps = std::log(eps);
  const int g = B.dim();
  if (rho / lambda > 2.0 * cap) {
    throw Error(ErrorCode::ToleranceUnreachable,
                "summand peak lies beyond the hard cap " + std::to_string(cap));
  }

  // The bound is monotone in R: bracket, then bisect.
  long lo = 1;
  if (log_tail_bound(g, lambda, rho, order, lo) < log_eps) {
    return TruncationBudget{eps, 1.0, 0, std::exp(log_tail_bound(g, lambda, rho, order, lo))};
  }
  long hi = 2;
  while (log_tail_bound(g, lambda, rho, order, hi) >= log_eps) {
    if (hi > cap) {
      throw Error(ErrorCode::ToleranceUnreachable,
                  "truncation radius would exceed the hard cap " + std::to_string(cap));
    }
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = (lo + hi) / 2;
    (log_tail_bound(g, lambda, rho, order, mid) < log_eps ? hi : lo) = mid;
  }
  if (hi > cap) {
    throw Error(ErrorCode::ToleranceUnreachable,
                "truncation radius would exceed the hard cap " + std::to_string(cap));
  }
  return TruncationBudget{eps, static_cast<double>(hi), 0,
                          std::exp(log_tail_bound(g, lambda, rho, order, hi))};
}

inline TruncationBudget truncation_radius(const SiegelMatrix& B, const CVector& u,
                                          const MultiIndex& a, double eps) {
  return truncation_radius(B, u, a.order(), eps);
}

/// Lattice points of the closed ball ||n|| <= R, sorted by ||n||^2 and then
/// lexicographically. Results are cached per (g, R) and shared read-only.
class LatticeBall {
 public:
  static std::shared_ptr<const LatticeBall> get(int g, int R) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const LatticeBall>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{g, R}];
    if (!slot) slot = std::shared_ptr<const LatticeBall>(new LatticeBall(g, R));
    return slot;
  }

  int dim() const { return g_; }
  int radius() const { return R_; }
  std::size_t size() const { return norms_.size(); }
  /// Coordinates of point k (g consecutive ints).
  const int* point(std::size_t k) const { return coords_.data() + k * static_cast<std::size_t>(g_); }
  IVector vector(std::size_t k) const { return Eigen::Map<const IVector>(point(k), g_); }
  long norm2(std::size_t k) const { return norms_[k]; }
  int shell_count() const { return shells_; }

 private:
  LatticeBall(int g, int R) : g_(g), R_(R) {
    std::vector<std::pair<long, std::vector<int>>> pts;
    std::vector<int> n(g, -R);
    const long r2 = static_cast<long>(R) * R;
    while (true) {
      long s = 0;
      for (int v : n) s += static_cast<long>(v) * v;
      if (s <= r2) pts.emplace_back(s, n);
      int k = g - 1;
      while (k >= 0 && n[k] == R) n[k--] = -R;
      if (k < 0) break;
      ++n[k];
    }
    std::sort(pts.begin(), pts.end());
    coords_.reserve(pts.size() * static_cast<std::size_t>(g));
    long last = -1;
    for (const auto& [s, v] : pts) {
      norms_.push_back(s);
      coords_.insert(coords_.end(), v.begin(), v.end());
      if (s != last) ++shells_;
      last = s;
    }
  }

  int g_;
  int R_;
  int shells_ = 0;
  std::vector<int> coords_;
  std::vector<long> norms_;
};

}  // namespace thetagauss
