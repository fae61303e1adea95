#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddd/histogram.hpp"
#include "ddd/moments.hpp"
#include "ddd/simulator.hpp"

namespace ddd {

struct GaussianParams {
  double mu = 0.0;
  double sigma = 0.0;
};

/// (m, n) candidate and its distance to the fit target.
struct Candidate {
  int m = 0;
  int n = 0;
  double rmse = 0.0;
};

template <typename Params>
struct FitResult {
  Params params;
  ScoreHistogram fitted;
  double distance = 0.0;
  std::vector<Candidate> candidates;  // filled on request by fit_ddd only
};

using DddFit = FitResult<DddParams>;
using GaussianFit = FitResult<GaussianParams>;

/// Precomputed pmfs for every (m, n) of the search grid under one configuration.
/// Entries are bit-identical to simulate_histogram with the same keys.
class TemplateBank {
 public:
  struct Fingerprint {
    std::uint64_t seed = 0;
    std::int64_t raters = 0;
    double scale = 1.0;
    BinRange bins;
    double middle_score = 0.0;
    double noise_amp = 0.0;
    double attr_coeff = 0.0;
    double attr_rate = 0.0;
    double attr_umax = 0.0;
    int m_max = 0;
    int n_max = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  };

  static TemplateBank build(const SimConfig& cfg, double scale = 1.0, int m_max = 6, int n_max = 6);

  [[nodiscard]] const Fingerprint& fingerprint() const noexcept { return fingerprint_; }
  [[nodiscard]] bool matches(const SimConfig& cfg, double scale) const;
  [[nodiscard]] const SimulationGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] const ScoreHistogram& at(int m, int n) const { return grid_.at(m, n); }
  [[nodiscard]] BinRange bins() const noexcept { return fingerprint_.bins; }

 private:
  TemplateBank(Fingerprint fp, SimulationGrid grid) : fingerprint_(fp), grid_(std::move(grid)) {}

  Fingerprint fingerprint_;
  SimulationGrid grid_;
};

/// Exhaustive search over the bank for the RMSE-closest template. Ties go to
/// the smaller m + n, then the smaller n.
DddFit fit_ddd(const ScoreHistogram& target, const TemplateBank& bank, bool with_candidates = false);

/// Discretized normal: mass of [b - 0.5, b + 0.5) per bin, renormalized over
/// the scale. sigma = 0 gives a point mass at the bin nearest mu.
ScoreHistogram discretized_gaussian(const GaussianParams& params, BinRange bins);

/// Method-of-moments Gaussian fit.
GaussianFit fit_gaussian(const ScoreHistogram& target);

// ---------------------------------------------------------------------------
// Fit-error reports (RMSE per mean-score bucket, moment MSE overall).

/// Unit-wide mean-score buckets over the scale. The scale has K - 2 buckets:
/// the first is open below and the last absorbs the top two units, so on
/// 1..10 the columns read 1-2, 2-3, ..., 8-9.
struct ScoreBuckets {
  BinRange bins;

  [[nodiscard]] int count() const noexcept { return std::max(1, bins.size() - 2); }
  [[nodiscard]] int bucket_of(double mean) const noexcept;
  [[nodiscard]] std::string label(int bucket) const;
};

struct FitComparison {
  std::string id;
  MomentSet target_moments;
  double target_mean = 0.0;
  int bucket = 0;
  GaussianFit gaussian;
  DddFit ddd;
};

FitComparison compare_fits(const std::string& id, const ScoreHistogram& target, const TemplateBank& bank);

struct BucketError {
  std::string label;
  std::size_t count = 0;
  std::optional<double> gaussian_rmse;  // empty when the bucket is empty
  std::optional<double> ddd_rmse;
};

/// Mean squared error of one fitted moment against the target's.
struct MomentError {
  double gaussian = 0.0;
  double ddd = 0.0;
  std::size_t count = 0;  // records where both moments were defined for both fits
};

struct FitReport {
  std::vector<BucketError> buckets;  // last entry is "all"
  MomentError mean, std, skew, kurt;  // kurt uses excess kurtosis
  std::size_t records = 0;
  std::size_t ddd_not_worse = 0;  // records where DDD RMSE <= Gaussian RMSE
};

/// Aggregates per-record fits in input order.
FitReport summarize_fits(std::span<const FitComparison> fits, BinRange bins);

struct ScaleScore {
  double scale = 1.0;
  double mean_rmse = 0.0;
};

/// Mean DDD fit RMSE for each candidate attractor scale, in the given order.
std::vector<ScaleScore> calibrate_scale(std::span<const ScoreHistogram> targets, const SimConfig& cfg,
                                        std::span<const double> scales);

}  // namespace ddd
