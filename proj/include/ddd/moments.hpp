#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "ddd/histogram.hpp"

namespace ddd {

/// First four moments of a score distribution. Skewness and kurtosis are
/// left empty when the distribution has zero variance.
template <typename Scalar>
struct BasicMomentSet {
  Scalar mean{0};
  Scalar std{0};
  std::optional<Scalar> skew;
  std::optional<Scalar> kurt;         // raw fourth standardized moment
  std::optional<Scalar> excess_kurt;  // kurt - 3

  [[nodiscard]] bool degenerate() const noexcept { return !skew.has_value(); }
};

using MomentSet = BasicMomentSet<double>;

/// Moments of the distribution putting mass pmf(k) on values(k).
/// Central moments are accumulated in a second pass around the mean.
template <typename DerivedValues, typename DerivedPmf>
[[nodiscard]] auto moments_of(const Eigen::MatrixBase<DerivedValues>& values,
                              const Eigen::MatrixBase<DerivedPmf>& pmf) {
  using Scalar = typename DerivedPmf::Scalar;
  if (values.size() != pmf.size()) throw std::invalid_argument("values and pmf differ in length");

  BasicMomentSet<Scalar> out;
  out.mean = values.cwiseProduct(pmf).sum();

  const auto centered = (values.array() - out.mean).eval();
  const auto sq = centered.square().eval();
  const Scalar m2 = (pmf.array() * sq).sum();
  out.std = std::sqrt(m2);
  if (!(m2 > Scalar(0))) return out;

  const Scalar m3 = (pmf.array() * sq * centered).sum();
  const Scalar m4 = (pmf.array() * sq * sq).sum();
  out.skew = m3 / (m2 * out.std);
  out.kurt = m4 / (m2 * m2);
  out.excess_kurt = *out.kurt - Scalar(3);
  return out;
}

[[nodiscard]] inline MomentSet moments(const ScoreHistogram& h) {
  return moments_of(h.bin_values(), h.pmf());
}

/// A point on the skewness-kurtosis map (raw kurtosis).
struct SkPoint {
  double skew = 0.0;
  double kurt = 0.0;

  /// Height above the lower bound K = S^2 + 1 attained by two-point laws.
  [[nodiscard]] double boundary_gap() const noexcept { return kurt - (skew * skew + 1.0); }
};

/// Empty for zero-variance histograms, which have no S-K point.
[[nodiscard]] inline std::optional<SkPoint> sk_point(const ScoreHistogram& h) {
  const MomentSet m = moments(h);
  if (m.degenerate()) return std::nullopt;
  return SkPoint{*m.skew, *m.kurt};
}

enum class Quality { low, high };

struct ClassLabel {
  Quality label = Quality::low;
  double threshold = 5.0;
  double delta = 0.0;

  [[nodiscard]] bool high() const noexcept { return label == Quality::high; }
};

/// Binary recast of a distribution: high iff its mean exceeds threshold + delta.
[[nodiscard]] inline ClassLabel classify(const ScoreHistogram& h, double threshold = 5.0,
                                         double delta = 0.0) {
  const double mean = moments(h).mean;
  return {mean > threshold + delta ? Quality::high : Quality::low, threshold, delta};
}

}  // namespace ddd
