#pragma once

// Statistical maps into projective space and the algebraic identities they
// satisfy: the g = 1 cubic and its derivatives, the Gauss map of the theta
// divisor, hypersurface fits (the g = 2 Kummer quartic) and probes of moment
// identifiability.

#include <Eigen/SVD>

#include <array>
#include <random>

#include "distribution.hpp"

namespace thetagauss {

/// Homogeneous coordinates with a label (multi-index) per coordinate.
struct ProjectivePoint {
  CVector coords;
  std::vector<MultiIndex> labels;

  int size() const { return static_cast<int>(coords.size()); }

  /// Scaled so the coordinate of largest modulus equals 1.
  CVector normalized() const {
    Eigen::Index k = 0;
    coords.cwiseAbs().maxCoeff(&k);
    return coords / coords(k);
  }

  /// Infinity-norm distance between normalized representatives.
  double distance(const ProjectivePoint& o) const {
    if (o.size() != size()) throw Error(ErrorCode::DimensionMismatch, "projective spaces differ");
    const CVector a = normalized();
    Eigen::Index k = 0;
    a.cwiseAbs().maxCoeff(&k);
    // Scale the other point on the same coordinate so near-ties in the
    // maximum cannot pick different pivots.
    if (o.coords(k) == Complex(0.0, 0.0)) return INFINITY;
    const CVector b = o.coords / o.coords(k);
    return (a - b).cwiseAbs().maxCoeff();
  }

  bool same_as(const ProjectivePoint& o, double tol = 1e-8) const { return distance(o) < tol; }
};

/// Labels of the statistical map of degree d: |a| <= d, |a| != 1, graded-lex, 0 first.
inline std::vector<MultiIndex> statistical_labels(int g, int d) {
  std::vector<MultiIndex> out;
  for (const auto& a : indices_up_to(g, d)) {
    if (a.order() != 1) out.push_back(a);
  }
  return out;
}

/// K_a = theta^|a| kappa_a as polynomials in the raw sums S_c = D^c theta / (2pi)^|c|:
///   K_{e_j} = S_{e_j},
///   K_a = theta^{|a|-1} S_a - sum_{b <= a', b != a'} C(a', b) K_{b+e_j} theta^{|a'-b|-1} S_{a'-b}
/// with a = a' + e_j. Finite on the theta divisor.
inline std::map<MultiIndex, Complex> homogeneous_cumulants(const ThetaSums& sums, int d) {
  const int g = sums.dim();
  const Complex th = sums.theta();
  std::vector<Complex> th_pow(static_cast<std::size_t>(d) + 1);
  th_pow[0] = 1.0;
  for (int k = 1; k <= d; ++k) th_pow[k] = th_pow[k - 1] * th;
  std::map<MultiIndex, Complex> K;
  for (const auto& a : indices_up_to(g, d)) {
    if (a.order() == 0) continue;
    if (a.order() == 1) {
      K[a] = sums.sum(a);
      continue;
    }
    int j = 0;
    while (a[j] == 0) ++j;
    const MultiIndex ej = MultiIndex::unit(g, j);
    const MultiIndex ap = a - ej;
    Complex k = th_pow[a.order() - 1] * sums.sum(a);
    for (const auto& b : indices_below(ap)) {
      if (b == ap) continue;
      const MultiIndex rest = ap - b;
      k -= multi_binomial(ap, b) * K.at(b + ej) * th_pow[rest.order() - 1] * sums.sum(rest);
    }
    K[a] = k;
  }
  return K;
}

/// phi_d(u) = [theta^d kappa_a]_{|a| <= d, |a| != 1}, with theta^d for a = 0.
inline ProjectivePoint statistical_map(int d, const ThetaPoint& p, double eps = 1e-13) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "statistical maps need d >= 2");
  const ThetaSums sums(p, d, scaled_tolerance(p, eps));
  const auto K = homogeneous_cumulants(sums, d);
  const Complex th = sums.theta();
  ProjectivePoint out{CVector(0), statistical_labels(p.dim(), d)};
  out.coords.resize(static_cast<Eigen::Index>(out.labels.size()));
  for (std::size_t k = 0; k < out.labels.size(); ++k) {
    const MultiIndex& a = out.labels[k];
    out.coords(static_cast<Eigen::Index>(k)) =
        a.order() == 0 ? std::pow(th, d) : std::pow(th, d - a.order()) * K.at(a);
  }
  if (out.coords.cwiseAbs().maxCoeff() < 1e-12) {
    throw Error(ErrorCode::IndeterminatePoint, "all coordinates vanish: singular point of the theta divisor");
  }
  return out;
}

/// Second log-derivatives e_k = D_u^2 log theta at the even half-periods, and
/// the coefficients of kappa_3^2 = -4 kappa_2^3 + a kappa_2^2 + b kappa_2 + c.
struct CubicCoefficients {
  Complex a, b, c;
  Complex e1, e2, e3;

  /// Same cubic in nu_k = (2pi)^k kappa_k: nu_3^2 = -4 nu_2^3 + a_nu nu_2^2 + b_nu nu_2 + c_nu.
  Complex a_nu() const { return 4.0 * (e1 + e2 + e3); }
  Complex b_nu() const { return -4.0 * (e1 * e2 + e1 * e3 + e2 * e3); }
  Complex c_nu() const { return 4.0 * e1 * e2 * e3; }
};

namespace geometry_detail {

inline ThetaPoint scalar_point(Complex u, Complex B) {
  return ThetaPoint(CVector::Constant(1, u), SiegelMatrix(CMatrix::Constant(1, 1, B)));
}

/// nu_k = D_u^k log theta for k = 1..4 at a g = 1 point off the divisor.
inline std::array<Complex, 5> log_derivatives(Complex u, Complex B, double eps) {
  const DiscreteGaussian d(scalar_point(u, B), eps);
  const MomentTable t(d, 4);
  std::array<Complex, 5> nu{};
  for (int k = 1; k <= 4; ++k) nu[k] = std::pow(kTwoPi, k) * t.cumulant(MultiIndex{k});
  return nu;
}

}  // namespace geometry_detail

inline CubicCoefficients cubic_coefficients(Complex B, double eps = 1e-13) {
  using geometry_detail::log_derivatives;
  CubicCoefficients c;
  c.e1 = log_derivatives(0.0, B, eps)[2];
  c.e2 = log_derivatives(0.5 * kI, B, eps)[2];
  c.e3 = log_derivatives(0.5 * B, B, eps)[2];
  const double pi2 = kPi * kPi;
  c.a = (c.e1 + c.e2 + c.e3) / pi2;
  c.b = -(c.e1 * c.e2 + c.e1 * c.e3 + c.e2 * c.e3) / (4.0 * pi2 * pi2);
  c.c = c.e1 * c.e2 * c.e3 / (16.0 * pi2 * pi2 * pi2);
  return c;
}

struct CubicResiduals {
  double r_cubic = 0.0;
  double r_quartic = 0.0;
  double r_det = 0.0;
  double max() const { return std::max({r_cubic, r_quartic, r_det}); }
};

/// Residuals of the cubic, its derivative nu_4 = -6 nu_2^2 + a_nu nu_2 + b_nu / 2,
/// and nu_2 nu_4 + 2 nu_2^3 - nu_3^2 = -(b_nu / 2) nu_2 - c_nu.
inline CubicResiduals verify_cubic(Complex u, Complex B, double eps = 1e-13) {
  const auto cc = cubic_coefficients(B, eps);
  const auto nu = geometry_detail::log_derivatives(u, B, eps);
  const Complex k2 = nu[2] / std::pow(kTwoPi, 2);
  const Complex k3 = nu[3] / std::pow(kTwoPi, 3);
  CubicResiduals r;
  r.r_cubic = std::abs(k3 * k3 + 4.0 * k2 * k2 * k2 - cc.a * k2 * k2 - cc.b * k2 - cc.c);
  r.r_quartic = std::abs(nu[4] + 6.0 * nu[2] * nu[2] - cc.a_nu() * nu[2] - 0.5 * cc.b_nu());
  r.r_det = std::abs(nu[2] * nu[4] + 2.0 * nu[2] * nu[2] * nu[2] - nu[3] * nu[3] + 0.5 * cc.b_nu() * nu[2] +
                     cc.c_nu());
  return r;
}

/// A zero of theta on the complex line base + t * direction with t in the
/// square [-extent, extent]^2, found by a grid scan and Newton refinement.
inline CVector find_theta_zero(const CVector& base, const CVector& direction, const SiegelMatrix& B,
                               double extent = 1.0, int grid = 41, double eps = 1e-14) {
  const int g = B.dim();
  if (base.size() != g || direction.size() != g) throw Error(ErrorCode::DimensionMismatch, "line dimension != g");
  if (direction.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "direction must be nonzero");
  if (!(extent > 0.0) || grid < 3) throw Error(ErrorCode::InvalidArgument, "bad search window");

  auto at = [&](Complex t) { return ThetaPoint(CVector(base + t * direction), B); };
  auto value = [&](Complex t) {
    const ThetaPoint p = at(t);
    return theta(p, scaled_tolerance(p, eps));
  };

  const double h = 2.0 * extent / (grid - 1);
  std::vector<double> mod(static_cast<std::size_t>(grid) * grid);
  auto idx = [grid](int i, int j) { return static_cast<std::size_t>(i) * grid + j; };
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) mod[idx(i, j)] = std::abs(value(Complex(-extent + i * h, -extent + j * h)));

  std::vector<std::pair<double, Complex>> candidates;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && a < grid && b >= 0 && b < grid && mod[idx(a, b)] < mod[idx(i, j)]) {
            is_min = false;
            break;
          }
        }
      if (is_min) candidates.emplace_back(mod[idx(i, j)], Complex(-extent + i * h, -extent + j * h));
    }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  const double limit = extent + h;
  for (const auto& [m, t0] : candidates) {
    Complex t = t0;
    for (int it = 0; it < 60; ++it) {
      const ThetaPoint p = at(t);
      const ThetaSums sums(p, 1, scaled_tolerance(p, eps));
      const Complex f = sums.theta();
      if (std::abs(f) < 1e-12) break;
      Complex df{0.0, 0.0};
      for (int i = 0; i < g; ++i) df += direction(i) * sums.derivative(MultiIndex::unit(g, i));
      if (df == Complex(0.0, 0.0)) break;
      Complex step = f / df;
      // Keep Newton inside a cell-sized trust region.
      if (std::abs(step) > 2.0 * h) step *= 2.0 * h / std::abs(step);
      t -= step;
      if (std::abs(t.real()) > limit || std::abs(t.imag()) > limit) break;
    }
    if (std::abs(t.real()) > limit || std::abs(t.imag()) > limit) continue;
    if (std::abs(value(t)) < 1e-10) return base + t * direction;
  }
  throw Error(ErrorCode::NoZeroFound, "theta has no zero on the searched segment of the line");
}

/// [d theta / du_1 : ... : d theta / du_g] at a point of the theta divisor.
inline ProjectivePoint gauss_map(const CVector& u, const SiegelMatrix& B, double eps = 1e-14) {
  const int g = B.dim();
  const ThetaPoint p(u, B);
  const ThetaSums sums(p, 1, scaled_tolerance(p, eps));
  if (!(std::abs(sums.theta()) < 1e-8)) {
    throw Error(ErrorCode::InvalidArgument, "the Gauss map is defined on the theta divisor only");
  }
  ProjectivePoint out{CVector(g), {}};
  for (int i = 0; i < g; ++i) {
    out.labels.push_back(MultiIndex::unit(g, i));
    out.coords(i) = sums.derivative(out.labels.back());
  }
  if (out.coords.cwiseAbs().maxCoeff() < 1e-10) {
    throw Error(ErrorCode::SingularDivisorPoint, "all first partials vanish");
  }
  return out;
}

/// Point i s + B t of the torus C^g / (i Z^g + B Z^g).
inline CVector torus_point(const SiegelMatrix& B, const RVector& s, const RVector& t) {
  return kI * s.cast<Complex>() + B.entries() * t.cast<Complex>();
}

/// Inverse of torus_point: real (s, t) with u = i s + B t.
inline std::pair<RVector, RVector> torus_coordinates(const SiegelMatrix& B, const CVector& u) {
  const RVector t = B.entries().real().ldlt().solve(RVector(u.real()));
  const RVector s = u.imag() - B.entries().imag() * t;
  return {s, t};
}

/// Distance between two points of the torus in (s, t) coordinates, modulo Z^2g.
inline double torus_distance(const SiegelMatrix& B, const CVector& u, const CVector& v) {
  const auto [s1, t1] = torus_coordinates(B, u);
  const auto [s2, t2] = torus_coordinates(B, v);
  double d = 0.0;
  auto wrap = [](double x) { return std::abs(x - std::round(x)); };
  for (Eigen::Index k = 0; k < s1.size(); ++k) d = std::max({d, wrap(s1(k) - s2(k)), wrap(t1(k) - t2(k))});
  return d;
}

struct HypersurfaceFit {
  std::vector<MultiIndex> monomials;
  CVector coefficients;       ///< unit-norm null vector, one entry per monomial
  RVector singular_values;    ///< ascending
  double residual = 0.0;      ///< smallest singular value
  double second_smallest = 0.0;
};

/// Degree-`degree` form vanishing on the points, as the smallest right singular
/// vector of the monomial matrix. Each point is scaled to unit max-modulus and
/// each row to unit Euclidean norm; neither changes the null space.
inline HypersurfaceFit fit_hypersurface(const std::vector<ProjectivePoint>& points, int degree) {
  if (points.empty()) throw Error(ErrorCode::RankDeficientInput, "no points");
  const int n = points.front().size();
  HypersurfaceFit fit;
  fit.monomials = indices_of_degree(n, degree);
  const auto m = static_cast<Eigen::Index>(fit.monomials.size());
  if (static_cast<Eigen::Index>(points.size()) < m) {
    throw Error(ErrorCode::RankDeficientInput,
                "need at least " + std::to_string(m) + " points for a degree-" + std::to_string(degree) + " fit");
  }
  CMatrix A(static_cast<Eigen::Index>(points.size()), m);
  for (std::size_t r = 0; r < points.size(); ++r) {
    if (points[r].size() != n) throw Error(ErrorCode::DimensionMismatch, "points live in different spaces");
    const CVector x = points[r].normalized();
    for (Eigen::Index k = 0; k < m; ++k) A(static_cast<Eigen::Index>(r), k) = power(x, fit.monomials[k]);
    A.row(static_cast<Eigen::Index>(r)).normalize();
  }
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  fit.singular_values = sv.reverse();
  fit.residual = fit.singular_values(0);
  fit.second_smallest = m > 1 ? fit.singular_values(1) : 0.0;
  if (fit.second_smallest < 1e-12 * std::max(1.0, sv(0))) {
    throw Error(ErrorCode::RankDeficientInput, "points lie on more than one hypersurface of this degree");
  }
  fit.coefficients = svd.matrixV().col(m - 1);
  return fit;
}

/// The quartic through statistical_map(2, .) images of a g = 2 abelian surface.
inline HypersurfaceFit kummer_quartic_fit(const SiegelMatrix& B, const std::vector<ProjectivePoint>& points) {
  if (B.dim() != 2) throw Error(ErrorCode::InvalidArgument, "the Kummer fit needs g = 2");
  for (const auto& p : points) {
    if (p.size() != 4) throw Error(ErrorCode::DimensionMismatch, "expected points of P^3 from the d = 2 map");
  }
  return fit_hypersurface(points, 4);
}

/// Images of `count` random torus points under statistical_map(d, .).
inline std::vector<ProjectivePoint> sample_statistical_map(const SiegelMatrix& B, int d, int count,
                                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int g = B.dim();
  std::vector<ProjectivePoint> out;
  while (static_cast<int>(out.size()) < count) {
    RVector s(g), t(g);
    for (int i = 0; i < g; ++i) {
      s(i) = U(rng);
      t(i) = U(rng);
    }
    try {
      out.push_back(statistical_map(d, ThetaPoint(torus_point(B, s, t), B)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IndeterminatePoint) throw;
    }
  }
  return out;
}

struct ProbeReport {
  int trials = 0;
  int collisions = 0;
  /// Smallest infinity-norm distance between order <= 3 moment vectors.
  double min_separation = INFINITY;
  /// Candidate pairs discarded as near the divisor or equivalent.
  int rejected = 0;
};

inline constexpr double kCollisionTol = 1e-6;

/// Raw moments mu_a for 1 <= |a| <= 3.
inline CVector low_order_moments(const DiscreteGaussian& d) {
  const MomentTable t(d, 3);
  std::vector<Complex> v;
  for (const auto& a : indices_up_to(d.dim(), 3)) {
    if (a.order() >= 1) v.push_back(t.moment(a));
  }
  return Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Random pairs of distinct torus points with fixed B; a collision is a pair
/// whose order <= 3 moments agree to 1e-6.
inline ProbeReport identifiability_probe(const SiegelMatrix& B, int trials, std::uint64_t seed = 1) {
  const int g = B.dim();
  if (g < 1 || g > 2) throw Error(ErrorCode::InvalidArgument, "the probe supports g = 1 and g = 2");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  auto draw_dist = [&](CVector& u) -> std::optional<DiscreteGaussian> {
    RVector s(g), t(g);
    for (int i = 0; i < g; ++i) {
      s(i) = U(rng);
      t(i) = U(rng);
    }
    u = torus_point(B, s, t);
    const ThetaPoint p(u, B);
    const ThetaSums sums(p, 0, scaled_tolerance(p, 1e-13));
    if (std::abs(sums.theta()) < 1e-3 * sums.abs_sum()) return std::nullopt;
    return DiscreteGaussian(p);
  };

  ProbeReport r;
  while (r.trials < trials) {
    CVector u1, u2;
    const auto d1 = draw_dist(u1);
    const auto d2 = draw_dist(u2);
    if (!d1 || !d2 || torus_distance(B, u1, u2) < 1e-3 || same_distribution(*d1, *d2)) {
      ++r.rejected;
      continue;
    }
    const double sep = (low_order_moments(*d1) - low_order_moments(*d2)).cwiseAbs().maxCoeff();
    r.min_separation = std::min(r.min_separation, sep);
    if (sep < kCollisionTol) ++r.collisions;
    ++r.trials;
  }
  return r;
}

}  // namespace thetagauss
