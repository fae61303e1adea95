#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ddd/histogram.hpp"
#include "ddd/random.hpp"

namespace ddd {

/// A psychological process: m positive and n negative attractors, each
/// shifting the score by an exponentially distributed magnitude times scale.
struct DddParams {
  int m = 0;
  int n = 0;
  double scale = 1.0;

  void validate(int m_max = 6, int n_max = 6) const;

  friend bool operator==(const DddParams&, const DddParams&) = default;
};

struct SimConfig {
  double middle_score = 5.0;
  std::int64_t raters = 1000;
  double noise_amp = 0.015;
  double attr_coeff = 0.5;
  double attr_rate = 0.5;
  double attr_umax = 10.0;
  std::uint64_t seed = 0;
  BinRange bins{1, 10};

  /// Defaults for a 1..K rating scale: middle score 5 on 10 bins, 4 on 7 bins,
  /// and the scale midpoint otherwise.
  static SimConfig for_bins(int bins);

  void validate() const;
};

/// One rater's draw: the attractor magnitudes (already scaled) and the noise term.
struct RaterDraw {
  std::vector<double> positive;
  std::vector<double> negative;
  double noise = 0.0;

  [[nodiscard]] double score(double middle_score) const;
};

/// Single attractor magnitude attr_coeff * exp(-attr_rate * U(0, attr_umax)), unscaled.
double sample_attractor(const SimConfig& cfg, RandomStream& stream);

/// noise_amp * U(-1, 1).
double sample_noise(const SimConfig& cfg, RandomStream& stream);

RaterDraw sample_rater_draw(const DddParams& params, const SimConfig& cfg, RandomStream& stream);

/// Unbinned rater score: middle + sum of positive - sum of negative attractors + noise.
double sample_rater(const DddParams& params, const SimConfig& cfg, RandomStream& stream);

/// Nearest score on the scale (ties to even), clamped to the bin range.
int bin_score(double v, const SimConfig& cfg);

/// cfg.raters unbinned scores from the (seed, m, n) stream.
Eigen::VectorXd simulate_scores(const DddParams& params, const SimConfig& cfg);

/// Count histogram of cfg.raters binned scores; consumes the same stream as simulate_scores.
ScoreHistogram simulate_histogram(const DddParams& params, const SimConfig& cfg);

/// Histograms for every (m, n) in [0, m_max] x [0, n_max].
class SimulationGrid {
 public:
  SimulationGrid(int m_max, int n_max, std::vector<ScoreHistogram> cells);

  [[nodiscard]] int m_max() const noexcept { return m_max_; }
  [[nodiscard]] int n_max() const noexcept { return n_max_; }
  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
  [[nodiscard]] const ScoreHistogram& at(int m, int n) const;

 private:
  int m_max_;
  int n_max_;
  std::vector<ScoreHistogram> cells_;  // row-major in m
};

SimulationGrid simulate_grid(const SimConfig& cfg, int m_max = 6, int n_max = 6, double scale = 1.0);

struct TraceStep {
  int time = 0;
  double value = 0.0;
};

struct TraceEvent {
  int time = 0;
  double magnitude = 0.0;  // signed: positive attractors push up, negative down
};

/// Illustrative single-rater path: starts at the middle score, jumps at each
/// attractor event, and is perturbed by white noise at every other step.
struct RaterTrace {
  std::vector<TraceStep> steps;
  std::vector<TraceEvent> events;
  double terminal_noise = 0.0;

  [[nodiscard]] double final_value() const { return steps.back().value; }
};

/// The final trace value equals sample_rater() on a fresh (seed, m, n) stream.
RaterTrace sample_trace(const DddParams& params, const SimConfig& cfg, int steps);

}  // namespace ddd
