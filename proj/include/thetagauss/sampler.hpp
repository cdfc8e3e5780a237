#pragma once

// Exact sampling from real discrete Gaussians by inverse CDF over the
// enumerated support, and a pooled Pearson goodness-of-fit statistic.

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <random>
#include <unordered_map>

#include "fitting.hpp"

namespace thetagauss {

inline constexpr const char* kRngName = "mt19937_64";

struct SamplerConfig {
  /// Probability mass allowed outside the enumerated support.
  double tail_eps = 1e-12;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(tail_eps > 0.0 && tail_eps < 1e-3)) {
      throw Error(ErrorCode::InvalidArgument, "tail_eps must lie in (0, 1e-3)");
    }
  }
};

namespace sampler_detail {

inline DiscreteGaussian real_distribution(const CanonicalPoint& p) {
  if (!fit_detail::is_pd(p.B)) throw Error(ErrorCode::NonPositiveDefinite, "B must be positive definite");
  return DiscreteGaussian(p.point());
}

inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sampler_detail

/// Radius R with sum_{||n|| > R} pmf(n) < tail_eps.
inline double support_radius(const CanonicalPoint& p, double tail_eps) {
  const auto d = sampler_detail::real_distribution(p);
  return truncation_radius(d.point().B(), d.u(), 0, tail_eps * d.theta_value().real()).radius;
}

/// Cumulative weights over the support in shell order.
class SupportTable {
 public:
  SupportTable(const CanonicalPoint& p, double tail_eps)
      : ball_(LatticeBall::get(p.dim(), static_cast<int>(support_radius(p, tail_eps)))) {
    const auto d = sampler_detail::real_distribution(p);
    cdf_.resize(ball_->size());
    mass_.resize(ball_->size());
    double acc = 0.0;
    for (std::size_t k = 0; k < ball_->size(); ++k) {
      mass_[k] = pmf(d, ball_->vector(k)).real();
      acc += mass_[k];
      cdf_[k] = acc;
    }
  }

  std::size_t size() const { return ball_->size(); }
  IVector point(std::size_t k) const { return ball_->vector(k); }
  /// True pmf (not renormalised) of cell k.
  double mass(std::size_t k) const { return mass_[k]; }
  double total_mass() const { return cdf_.back(); }

  /// Index of the cell containing the uniform variate v in [0, 1).
  std::size_t locate(double v) const {
    const double target = v * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::shared_ptr<const LatticeBall> ball_;
  std::vector<double> cdf_;
  std::vector<double> mass_;
};

inline std::vector<IVector> draw(const CanonicalPoint& p, long count, const SamplerConfig& cfg) {
  cfg.validate();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  const SupportTable table(p, cfg.tail_eps);
  std::mt19937_64 rng(cfg.seed);
  std::vector<IVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(table.point(table.locate(sampler_detail::uniform53(rng))));
  return out;
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
};

inline constexpr double kMinExpectedCount = 5.0;

/// Pearson statistic over support cells taken in shell order; consecutive
/// cells are pooled until the expected count reaches 5, and the remainder
/// (including all mass and draws off the support) joins the last pooled cell.
inline ChiSquareResult chi_square(const std::vector<IVector>& sample, const CanonicalPoint& p,
                                  double tail_eps = 1e-12) {
  if (sample.empty()) throw Error(ErrorCode::TooFewSamples, "empty sample");
  const SupportTable table(p, tail_eps);
  const double N = static_cast<double>(sample.size());

  auto key = [](const IVector& n) {
    std::string s;
    for (Eigen::Index i = 0; i < n.size(); ++i) s += std::to_string(n(i)) + ",";
    return s;
  };
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < table.size(); ++k) index.emplace(key(table.point(k)), k);
  std::vector<double> observed(table.size(), 0.0);
  double outside = 0.0;
  for (const auto& n : sample) {
    if (n.size() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "sample point has wrong dimension");
    const auto it = index.find(key(n));
    if (it == index.end()) {
      outside += 1.0;
    } else {
      observed[it->second] += 1.0;
    }
  }

  std::vector<std::pair<double, double>> cells;  // (expected, observed)
  double e = 0.0, o = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    e += N * table.mass(k);
    o += observed[k];
    if (e >= kMinExpectedCount) {
      cells.emplace_back(e, o);
      e = o = 0.0;
    }
  }
  e += N * std::max(0.0, 1.0 - table.total_mass());
  o += outside;
  if (cells.empty()) throw Error(ErrorCode::TooFewSamples, "no cell reaches an expected count of 5");
  cells.back().first += e;
  cells.back().second += o;

  ChiSquareResult r;
  for (const auto& [ex, ob] : cells) r.statistic += (ob - ex) * (ob - ex) / ex;
  r.dof = static_cast<int>(cells.size()) - 1;
  return r;
}

/// Upper quantile of chi-square(dof); dof = 0 has all mass at 0.
inline double chi_square_quantile(int dof, double level) {
  if (dof <= 0) return 0.0;
  return boost::math::quantile(boost::math::chi_squared(static_cast<double>(dof)), level);
}

}  // namespace thetagauss
