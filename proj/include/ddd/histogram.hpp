#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include <Eigen/Core>

namespace ddd {

using Pmf = Eigen::VectorXd;
using VoteCounts = Eigen::VectorX<std::int64_t>;

/// Raised when a histogram cannot be built from the given data.
class HistogramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Contiguous integer score scale, e.g. 1..10 (AVA) or 1..7 (Photo.net).
struct BinRange {
  int first = 1;
  int last = 10;

  [[nodiscard]] int size() const noexcept { return last - first + 1; }
  [[nodiscard]] bool contains(int score) const noexcept { return score >= first && score <= last; }
  [[nodiscard]] Eigen::Index index_of(int score) const noexcept { return score - first; }
  [[nodiscard]] Eigen::VectorXd values() const {
    return Eigen::VectorXd::LinSpaced(size(), first, last);
  }

  static BinRange with_size(int bins, int first = 1) { return {first, first + bins - 1}; }

  friend bool operator==(const BinRange&, const BinRange&) = default;
};

/// Probability mass over unit-spaced integer score bins, optionally backed
/// by the raw vote counts it was derived from.
///
/// The pmf always sums to one within 1e-9 and has no negative entries.
class ScoreHistogram {
 public:
  ScoreHistogram() = default;

  /// pmf_k = counts_k / sum(counts). Throws if any count is negative or all are zero.
  static ScoreHistogram from_counts(VoteCounts counts, int first_bin = 1);

  /// Accepts non-negative finite weights and rescales them to unit mass.
  static ScoreHistogram from_weights(Pmf weights, int first_bin = 1);

  static ScoreHistogram point_mass(BinRange bins, int score);

  [[nodiscard]] const Pmf& pmf() const noexcept { return pmf_; }
  [[nodiscard]] const std::optional<VoteCounts>& counts() const noexcept { return counts_; }
  [[nodiscard]] BinRange bins() const noexcept {
    return {first_bin_, first_bin_ + static_cast<int>(pmf_.size()) - 1};
  }
  [[nodiscard]] Eigen::Index size() const noexcept { return pmf_.size(); }
  [[nodiscard]] Eigen::VectorXd bin_values() const { return bins().values(); }
  [[nodiscard]] std::int64_t total_votes() const noexcept { return counts_ ? counts_->sum() : 0; }

  friend bool operator==(const ScoreHistogram& a, const ScoreHistogram& b) {
    return a.first_bin_ == b.first_bin_ && a.pmf_.size() == b.pmf_.size() && a.pmf_ == b.pmf_ &&
           a.counts_.has_value() == b.counts_.has_value() &&
           (!a.counts_ || *a.counts_ == *b.counts_);
  }

 private:
  int first_bin_ = 1;
  Pmf pmf_;
  std::optional<VoteCounts> counts_;
};

/// Builds a histogram from raw vote counts.
ScoreHistogram normalize(std::span<const std::int64_t> counts, int first_bin = 1);

}  // namespace ddd
