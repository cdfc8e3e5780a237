#pragma once

// Inverse of the moment map on the real slice. The discrete Gaussian is an
// exponential family in x = (u, B_ij for i <= j) with sufficient statistic
//   T(n) = (2 pi n_i, -pi n_i^2, -2 pi n_i n_j for i < j),
// so F(x) = log theta(x) - <x, E_target[T]> is strictly convex with gradient
// E_x[T] - E_target[T] and Hessian Cov_x(T).

#include <optional>

#include "distribution.hpp"

namespace thetagauss {

struct MomentData {
  RVector mu;
  RMatrix sigma;

  int dim() const { return static_cast<int>(mu.size()); }

  /// Throws NotPD unless sigma is symmetric positive definite.
  void validate() const {
    const int g = dim();
    if (g == 0 || sigma.rows() != g || sigma.cols() != g) {
      throw Error(ErrorCode::DimensionMismatch, "mu and sigma sizes disagree");
    }
    if (!mu.allFinite() || !sigma.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite moments");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error(ErrorCode::NotSymmetric, "sigma must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(sigma, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 1e-12 * scale)) {
      throw Error(ErrorCode::NotPD, "sigma must be positive definite");
    }
  }
};

/// Real parameters (u, B) with B symmetric positive definite.
struct CanonicalPoint {
  RVector u;
  RMatrix B;

  int dim() const { return static_cast<int>(u.size()); }
  ThetaPoint point() const { return ThetaPoint(u, B); }
};

struct FitOptions {
  double tol = 1e-9;
  int max_iterations = 200;
  /// Replace the analytic Hessian by central differences of the gradient.
  bool finite_difference_hessian = false;
  double eps = DiscreteGaussian::kDefaultEps;
};

struct FitReport {
  CanonicalPoint params;
  int iterations = 0;
  /// Infinity norm of forward_moments(params) - target.
  double grad_norm = 0.0;
  double newton_decrement = 0.0;
  double objective = 0.0;
  bool converged = false;
};

namespace fit_detail {

inline int param_count(int g) { return g + g * (g + 1) / 2; }

inline RVector pack(const CanonicalPoint& p) {
  const int g = p.dim();
  RVector x(param_count(g));
  x.head(g) = p.u;
  int k = g;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) x(k++) = p.B(i, j);
  return x;
}

inline CanonicalPoint unpack(const RVector& x, int g) {
  CanonicalPoint p{x.head(g), RMatrix(g, g)};
  int k = g;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      p.B(i, j) = x(k++);
      p.B(j, i) = p.B(i, j);
    }
  return p;
}

inline bool is_pd(const RMatrix& B) {
  if (!B.allFinite()) return false;
  Eigen::LLT<RMatrix> llt(B);
  return llt.info() == Eigen::Success && B.diagonal().minCoeff() > 0.0 &&
         Eigen::SelfAdjointEigenSolver<RMatrix>(B, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() >
             kMinRealEigenvalue;
}

/// Expected sufficient statistic from first and second moments.
inline RVector statistic_mean(const RVector& mu, const RMatrix& second) {
  const int g = static_cast<int>(mu.size());
  RVector t(param_count(g));
  t.head(g) = kTwoPi * mu;
  int k = g;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) t(k++) = (i == j ? -kPi : -kTwoPi) * second(i, j);
  return t;
}

/// Coefficient c and exponent of the monomial behind statistic k: T_k = c * n^a.
inline std::pair<double, MultiIndex> statistic_term(int g, int k) {
  if (k < g) return {kTwoPi, MultiIndex::unit(g, k)};
  int r = g;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j, ++r)
      if (r == k) return {i == j ? -kPi : -kTwoPi, MultiIndex::unit(g, i) + MultiIndex::unit(g, j)};
  throw Error(ErrorCode::InvalidArgument, "statistic index out of range");
}

struct Evaluation {
  double log_theta = 0.0;
  RVector mean_T;   // E_x[T]
  RMatrix cov_T;    // Cov_x(T)
  RVector mu;
  RMatrix sigma;
};

inline Evaluation evaluate(const CanonicalPoint& p, double eps, bool with_hessian) {
  const int g = p.dim();
  const DiscreteGaussian d(p.point(), eps);
  const MomentTable t(d, with_hessian ? 4 : 2);
  Evaluation e;
  e.log_theta = std::log(d.theta_value().real());
  e.mu = t.mean().real();
  RMatrix second(g, g);
  e.sigma.resize(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const MultiIndex a = MultiIndex::unit(g, i) + MultiIndex::unit(g, j);
      second(i, j) = t.moment(a).real();
      e.sigma(i, j) = t.central(a).real();
    }
  e.mean_T = statistic_mean(e.mu, second);
  if (with_hessian) {
    const int m = param_count(g);
    e.cov_T.resize(m, m);
    for (int k = 0; k < m; ++k) {
      const auto [ck, ak] = statistic_term(g, k);
      for (int l = k; l < m; ++l) {
        const auto [cl, al] = statistic_term(g, l);
        e.cov_T(k, l) = ck * cl * t.moment(ak + al).real() - e.mean_T(k) * e.mean_T(l);
        e.cov_T(l, k) = e.cov_T(k, l);
      }
    }
  }
  return e;
}

inline RVector target_statistic(const MomentData& target) {
  return statistic_mean(target.mu, target.sigma + target.mu * target.mu.transpose());
}

inline double residual(const Evaluation& e, const MomentData& target) {
  return std::max((e.mu - target.mu).cwiseAbs().maxCoeff(), (e.sigma - target.sigma).cwiseAbs().maxCoeff());
}

}  // namespace fit_detail

/// Mean and covariance of the real discrete Gaussian, the covariance taken
/// through the heat equation: E[n n^T] = -(1/2pi)(1/theta)(D_B theta + diag D_B theta)
/// with off-diagonal derivatives moving B_ij and B_ji together.
inline MomentData forward_moments(const CanonicalPoint& p, double eps = DiscreteGaussian::kDefaultEps) {
  const int g = p.dim();
  const DiscreteGaussian d(p.point(), eps);
  const ThetaSums sums(d.point(), 2, d.working_eps());
  const double th = d.theta_value().real();
  MomentData m{RVector(g), RMatrix(g, g)};
  for (int i = 0; i < g; ++i) m.mu(i) = sums.derivative(MultiIndex::unit(g, i)).real() / (kTwoPi * th);
  RMatrix dB(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      dB(i, j) = theta_dB(i, j, sums).real();
      dB(j, i) = dB(i, j);
    }
  const RMatrix D = dB + RMatrix(dB.diagonal().asDiagonal());
  m.sigma = -D / (kTwoPi * th) - m.mu * m.mu.transpose();
  return m;
}

/// F(u, B) = log theta(u, B) - 2 pi u^T mu + pi <B, Sigma + mu mu^T>.
inline double objective(const CanonicalPoint& p, const MomentData& target,
                        double eps = DiscreteGaussian::kDefaultEps) {
  const DiscreteGaussian d(p.point(), eps);
  return std::log(d.theta_value().real()) -
         fit_detail::pack(p).dot(fit_detail::target_statistic(target));
}

/// dF over (u, upper triangle of B).
inline RVector objective_gradient(const CanonicalPoint& p, const MomentData& target,
                                  double eps = DiscreteGaussian::kDefaultEps) {
  return fit_detail::evaluate(p, eps, false).mean_T - fit_detail::target_statistic(target);
}

/// Cov(T), the Hessian of F; independent of the target.
inline RMatrix objective_hessian(const CanonicalPoint& p, double eps = DiscreteGaussian::kDefaultEps) {
  return fit_detail::evaluate(p, eps, true).cov_T;
}

inline RMatrix finite_difference_hessian(const CanonicalPoint& p, double h = 1e-5,
                                         double eps = DiscreteGaussian::kDefaultEps) {
  const int g = p.dim();
  const RVector x = fit_detail::pack(p);
  const int m = static_cast<int>(x.size());
  RMatrix H(m, m);
  for (int k = 0; k < m; ++k) {
    RVector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    H.col(k) = (fit_detail::evaluate(fit_detail::unpack(xp, g), eps, false).mean_T -
                fit_detail::evaluate(fit_detail::unpack(xm, g), eps, false).mean_T) /
               (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

/// Real (u, B) whose mean and covariance are the target, by damped Newton on F.
inline FitReport fit(const MomentData& target, const FitOptions& opt = {}) {
  target.validate();
  if (!(opt.tol >= 1e-10)) throw Error(ErrorCode::InvalidArgument, "tol must be >= 1e-10");
  if (opt.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  const int g = target.dim();
  const RVector t_bar = fit_detail::target_statistic(target);

  // Continuous-Gaussian start: B0 = Sigma^-1 / 2pi, u0 = B0 mu.
  CanonicalPoint p;
  p.B = target.sigma.inverse() / kTwoPi;
  p.B = 0.5 * (p.B + p.B.transpose()).eval();
  p.u = p.B * target.mu;
  RVector x = fit_detail::pack(p);

  FitReport report;
  for (int it = 0;; ++it) {
    const auto e = fit_detail::evaluate(p, opt.eps, !opt.finite_difference_hessian);
    const RVector grad = e.mean_T - t_bar;
    const RMatrix H = opt.finite_difference_hessian ? finite_difference_hessian(p, 1e-5, opt.eps) : e.cov_T;
    Eigen::LDLT<RMatrix> ldlt(H);
    const RVector step = -ldlt.solve(grad);
    const double decrement = std::max(0.0, -grad.dot(step));
    const double F = e.log_theta - x.dot(t_bar);

    report.params = p;
    report.iterations = it;
    report.grad_norm = fit_detail::residual(e, target);
    report.newton_decrement = decrement;
    report.objective = F;
    if (report.grad_norm < opt.tol && decrement < opt.tol * opt.tol) {
      report.converged = true;
      return report;
    }
    if (it >= opt.max_iterations || !step.allFinite()) {
      throw Error(ErrorCode::NoConvergence,
                  "Newton stopped after " + std::to_string(it) + " iterations with moment residual " +
                      std::to_string(report.grad_norm) + " and decrement " + std::to_string(decrement));
    }

    // Inside the quadratic region a full step is taken; F is flat to rounding
    // there, so a sufficient-decrease test would stall.
    const bool full_step = decrement < 1e-6;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const RVector xt = x + t * step;
      const CanonicalPoint trial = fit_detail::unpack(xt, g);
      if (!fit_detail::is_pd(trial.B)) continue;
      double Ft;
      try {
        Ft = objective(trial, target, opt.eps);
      } catch (const Error&) {
        continue;
      }
      if (full_step || Ft <= F - 1e-4 * t * decrement) {
        x = xt;
        p = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Error(ErrorCode::NoConvergence,
                  "line search failed at iteration " + std::to_string(it) + " with moment residual " +
                      std::to_string(report.grad_norm));
    }
  }
}

enum class CovarianceEstimator {
  Unbiased,           ///< divide by N - 1
  MaximumLikelihood,  ///< divide by N
};

inline MomentData sample_moments(const std::vector<IVector>& data,
                                 CovarianceEstimator estimator = CovarianceEstimator::Unbiased) {
  if (data.empty()) throw Error(ErrorCode::DegenerateSample, "empty sample");
  const int g = static_cast<int>(data.front().size());
  const double N = static_cast<double>(data.size());
  RVector mean = RVector::Zero(g);
  for (const auto& n : data) {
    if (n.size() != g) throw Error(ErrorCode::DimensionMismatch, "sample points differ in dimension");
    mean += n.cast<double>();
  }
  mean /= N;
  RMatrix scatter = RMatrix::Zero(g, g);
  for (const auto& n : data) {
    const RVector c = n.cast<double>() - mean;
    scatter += c * c.transpose();
  }
  const double denom = estimator == CovarianceEstimator::Unbiased ? N - 1.0 : N;
  if (denom <= 0.0) throw Error(ErrorCode::DegenerateSample, "need at least two observations");
  return {mean, scatter / denom};
}

/// Sample mean and covariance, then fit. DegenerateSample if the covariance is singular.
inline FitReport fit_from_sample(const std::vector<IVector>& data, const FitOptions& opt = {},
                                 CovarianceEstimator estimator = CovarianceEstimator::Unbiased) {
  const MomentData m = sample_moments(data, estimator);
  try {
    m.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotPD) throw Error(ErrorCode::DegenerateSample, "sample covariance is singular");
    throw;
  }
  return fit(m, opt);
}

}  // namespace thetagauss
