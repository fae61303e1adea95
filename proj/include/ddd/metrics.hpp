#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ddd {

// Distances between two score distributions given as pmfs over the same bins.
// P-prefixed metrics work on the pmfs, C-prefixed ones on the running CDFs.
// Asymmetric metrics take the ground truth first. Logarithms are natural.

inline constexpr double kLogFloor = 1e-6;

namespace detail {

template <typename DerivedP, typename DerivedQ>
void require_same_length(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions differ in length: " + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()));
  }
}

template <typename Derived>
auto cumulative(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cdf(p.size());
  Scalar run{0};
  for (Eigen::Index k = 0; k < p.size(); ++k) cdf(k) = run += p(k);
  return cdf;
}

// Raises entries below kLogFloor to the floor and restores unit mass. Inputs
// already above the floor are returned untouched, so equal inputs stay equal.
template <typename Derived>
auto floored(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = p;
  if ((out.array() < Scalar(kLogFloor)).any()) {
    out = out.cwiseMax(Scalar(kLogFloor));
    out /= out.sum();
  }
  return out;
}

// sum_k w_k ln(a_k / b_k), skipping zero weights.
template <typename W, typename A, typename B>
auto weighted_log_ratio(const W& w, const A& a, const B& b) {
  using Scalar = typename W::Scalar;
  Scalar acc{0};
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) > Scalar(0)) acc += w(k) * std::log(a(k) / b(k));
  }
  return acc;
}

}  // namespace detail

/// Euclidean distance between pmfs.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto ped(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  return (p - q).norm();
}

/// Cross entropy -sum p ln q, with q floored.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto pce(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  const auto qf = detail::floored(q);
  using Scalar = typename DerivedP::Scalar;
  Scalar acc{0};
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) > Scalar(0)) acc -= p(k) * std::log(qf(k));
  }
  return acc;
}

/// Kullback-Leibler divergence KL(p || q); both log arguments are floored.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto pkl(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  return detail::weighted_log_ratio(p, detail::floored(p), detail::floored(q));
}

/// Jensen-Shannon divergence, bounded by ln 2.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto pjs(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  using Scalar = typename DerivedP::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mid = (p + q) / Scalar(2);
  const auto pf = detail::floored(p);
  const auto qf = detail::floored(q);
  const auto mf = detail::floored(mid);
  return Scalar(0.5) * detail::weighted_log_ratio(p, pf, mf) +
         Scalar(0.5) * detail::weighted_log_ratio(q, qf, mf);
}

/// Chebyshev distance max_k |p_k - q_k|.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto pcs(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  return (p - q).cwiseAbs().maxCoeff();
}

/// Euclidean distance between CDFs.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto ced(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  return (detail::cumulative(p) - detail::cumulative(q)).norm();
}

/// Jensen-Shannon summand applied to CDF values; 0 ln(0/x) is taken as 0.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto cjs(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  using Scalar = typename DerivedP::Scalar;
  const auto cp = detail::cumulative(p);
  const auto cq = detail::cumulative(q);
  Scalar acc{0};
  for (Eigen::Index k = 0; k < cp.size(); ++k) {
    const Scalar sum = cp(k) + cq(k);
    if (cp(k) > Scalar(0)) acc += cp(k) * std::log(Scalar(2) * cp(k) / sum);
    if (cq(k) > Scalar(0)) acc += cq(k) * std::log(Scalar(2) * cq(k) / sum);
  }
  return Scalar(0.5) * acc;
}

/// Earth mover's distance on a unit-spaced scale: ((1/K) sum |P_k - Q_k|^r)^(1/r).
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto emd(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                       int r = 1) {
  detail::require_same_length(p, q);
  if (r != 1 && r != 2) throw std::invalid_argument("emd supports r = 1 or r = 2");
  using Scalar = typename DerivedP::Scalar;
  const auto gap = (detail::cumulative(p) - detail::cumulative(q)).cwiseAbs().eval();
  const auto k = static_cast<Scalar>(p.size());
  if (r == 1) return gap.sum() / k;
  return std::sqrt(gap.squaredNorm() / k);
}

/// Root mean square error sqrt((1/K) sum (p_k - q_k)^2). Shared by fitting and evaluation.
template <typename DerivedP, typename DerivedQ>
[[nodiscard]] auto rmse(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  detail::require_same_length(p, q);
  using Scalar = typename DerivedP::Scalar;
  return std::sqrt((p - q).squaredNorm() / static_cast<Scalar>(p.size()));
}

/// All per-pair distances for one prediction.
struct PairMetrics {
  double ped = 0, pce = 0, pjs = 0, ced = 0, cjs = 0, pcs = 0, pkl = 0, emd = 0, emd_r2 = 0, rmse = 0;
};

template <typename DerivedT, typename DerivedP>
[[nodiscard]] PairMetrics pair_metrics(const Eigen::MatrixBase<DerivedT>& truth,
                                       const Eigen::MatrixBase<DerivedP>& pred) {
  return {ddd::ped(truth, pred), ddd::pce(truth, pred), ddd::pjs(truth, pred),
          ddd::ced(truth, pred), ddd::cjs(truth, pred), ddd::pcs(truth, pred),
          ddd::pkl(truth, pred), ddd::emd(truth, pred, 1), ddd::emd(truth, pred, 2),
          ddd::rmse(truth, pred)};
}

}  // namespace ddd
