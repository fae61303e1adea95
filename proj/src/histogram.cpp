#include "ddd/histogram.hpp"

#include <string>

namespace ddd {

ScoreHistogram ScoreHistogram::from_counts(VoteCounts counts, int first_bin) {
  if (counts.size() == 0) throw HistogramError("histogram needs at least one bin");
  if ((counts.array() < 0).any()) throw HistogramError("vote counts must be non-negative");
  const std::int64_t total = counts.sum();
  if (total == 0) throw HistogramError("histogram has no votes");

  ScoreHistogram h;
  h.first_bin_ = first_bin;
  h.pmf_ = counts.cast<double>() / static_cast<double>(total);
  h.counts_ = std::move(counts);
  return h;
}

ScoreHistogram ScoreHistogram::from_weights(Pmf weights, int first_bin) {
  if (weights.size() == 0) throw HistogramError("histogram needs at least one bin");
  if (!weights.allFinite()) throw HistogramError("histogram weights must be finite");
  if ((weights.array() < 0.0).any()) throw HistogramError("histogram weights must be non-negative");
  const double total = weights.sum();
  if (!(total > 0.0)) throw HistogramError("histogram has zero total mass");

  ScoreHistogram h;
  h.first_bin_ = first_bin;
  h.pmf_ = std::move(weights);
  if (total != 1.0) h.pmf_ /= total;
  return h;
}

ScoreHistogram ScoreHistogram::point_mass(BinRange bins, int score) {
  if (!bins.contains(score)) {
    throw HistogramError("score " + std::to_string(score) + " outside the bin range");
  }
  Pmf pmf = Pmf::Zero(bins.size());
  pmf(bins.index_of(score)) = 1.0;
  return from_weights(std::move(pmf), bins.first);
}

ScoreHistogram normalize(std::span<const std::int64_t> counts, int first_bin) {
  VoteCounts c(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t k = 0; k < counts.size(); ++k) c(static_cast<Eigen::Index>(k)) = counts[k];
  return ScoreHistogram::from_counts(std::move(c), first_bin);
}

}  // namespace ddd
