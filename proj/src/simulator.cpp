#include "ddd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ddd/parallel.hpp"

namespace ddd {

void DddParams::validate(int m_max, int n_max) const {
  if (m < 0 || m > m_max) throw std::invalid_argument("m must lie in [0, " + std::to_string(m_max) + "]");
  if (n < 0 || n > n_max) throw std::invalid_argument("n must lie in [0, " + std::to_string(n_max) + "]");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
}

SimConfig SimConfig::for_bins(int bins) {
  if (bins < 2) throw std::invalid_argument("a rating scale needs at least two bins");
  SimConfig cfg;
  cfg.bins = BinRange::with_size(bins);
  if (bins == 10) {
    cfg.middle_score = 5.0;
  } else if (bins == 7) {
    cfg.middle_score = 4.0;
  } else {
    cfg.middle_score = 0.5 * (cfg.bins.first + cfg.bins.last);
  }
  return cfg;
}

void SimConfig::validate() const {
  if (raters < 1) throw std::invalid_argument("raters must be at least 1");
  if (!(noise_amp >= 0.0)) throw std::invalid_argument("noise amplitude must be non-negative");
  if (!(attr_coeff > 0.0) || !(attr_rate > 0.0) || !(attr_umax > 0.0)) {
    throw std::invalid_argument("attractor constants must be positive");
  }
  if (bins.size() < 2) throw std::invalid_argument("bin range needs at least two bins");
  if (!std::isfinite(middle_score)) throw std::invalid_argument("middle score must be finite");
}

double RaterDraw::score(double middle_score) const {
  double v = middle_score;
  for (double e : positive) v += e;
  for (double e : negative) v -= e;
  return v + noise;
}

double sample_attractor(const SimConfig& cfg, RandomStream& stream) {
  return cfg.attr_coeff * std::exp(-cfg.attr_rate * stream.uniform(0.0, cfg.attr_umax));
}

double sample_noise(const SimConfig& cfg, RandomStream& stream) {
  return cfg.noise_amp * stream.uniform(-1.0, 1.0);
}

RaterDraw sample_rater_draw(const DddParams& params, const SimConfig& cfg, RandomStream& stream) {
  RaterDraw draw;
  draw.positive.reserve(static_cast<std::size_t>(params.m));
  draw.negative.reserve(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.m; ++i) draw.positive.push_back(params.scale * sample_attractor(cfg, stream));
  for (int j = 0; j < params.n; ++j) draw.negative.push_back(params.scale * sample_attractor(cfg, stream));
  draw.noise = sample_noise(cfg, stream);
  return draw;
}

double sample_rater(const DddParams& params, const SimConfig& cfg, RandomStream& stream) {
  // Same draw order as sample_rater_draw, without the allocations.
  double v = cfg.middle_score;
  for (int i = 0; i < params.m; ++i) v += params.scale * sample_attractor(cfg, stream);
  for (int j = 0; j < params.n; ++j) v -= params.scale * sample_attractor(cfg, stream);
  return v + sample_noise(cfg, stream);
}

int bin_score(double v, const SimConfig& cfg) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot bin a non-finite score");
  const double rounded = std::nearbyint(v);  // default rounding mode is ties-to-even
  return static_cast<int>(std::clamp(rounded, double(cfg.bins.first), double(cfg.bins.last)));
}

Eigen::VectorXd simulate_scores(const DddParams& params, const SimConfig& cfg) {
  params.validate(params.m, params.n);
  cfg.validate();
  RandomStream stream = RandomStream::for_cell(cfg.seed, params.m, params.n);
  Eigen::VectorXd scores(cfg.raters);
  for (Eigen::Index r = 0; r < scores.size(); ++r) scores(r) = sample_rater(params, cfg, stream);
  return scores;
}

ScoreHistogram simulate_histogram(const DddParams& params, const SimConfig& cfg) {
  params.validate(params.m, params.n);
  cfg.validate();
  RandomStream stream = RandomStream::for_cell(cfg.seed, params.m, params.n);
  VoteCounts counts = VoteCounts::Zero(cfg.bins.size());
  for (std::int64_t r = 0; r < cfg.raters; ++r) {
    ++counts(cfg.bins.index_of(bin_score(sample_rater(params, cfg, stream), cfg)));
  }
  return ScoreHistogram::from_counts(std::move(counts), cfg.bins.first);
}

SimulationGrid::SimulationGrid(int m_max, int n_max, std::vector<ScoreHistogram> cells)
    : m_max_(m_max), n_max_(n_max), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>((m_max + 1) * (n_max + 1))) {
    throw std::invalid_argument("grid cell count does not match its bounds");
  }
}

const ScoreHistogram& SimulationGrid::at(int m, int n) const {
  if (m < 0 || m > m_max_ || n < 0 || n > n_max_) throw std::out_of_range("grid cell out of range");
  return cells_[static_cast<std::size_t>(m * (n_max_ + 1) + n)];
}

SimulationGrid simulate_grid(const SimConfig& cfg, int m_max, int n_max, double scale) {
  if (m_max < 0 || n_max < 0) throw std::invalid_argument("grid bounds must be non-negative");
  cfg.validate();
  std::vector<ScoreHistogram> cells(static_cast<std::size_t>((m_max + 1) * (n_max + 1)));
  parallel_for(cells.size(), [&](std::size_t i) {
    const int m = static_cast<int>(i) / (n_max + 1);
    const int n = static_cast<int>(i) % (n_max + 1);
    cells[i] = simulate_histogram({m, n, scale}, cfg);
  });
  return {m_max, n_max, std::move(cells)};
}

RaterTrace sample_trace(const DddParams& params, const SimConfig& cfg, int steps) {
  params.validate(params.m, params.n);
  cfg.validate();
  if (steps < params.m + params.n || steps < 1) {
    throw std::invalid_argument("trace needs at least m + n steps");
  }

  RandomStream stream = RandomStream::for_cell(cfg.seed, params.m, params.n);
  const RaterDraw draw = sample_rater_draw(params, cfg, stream);

  // Partial Fisher-Yates over times 1..steps picks distinct event slots.
  std::vector<int> times(static_cast<std::size_t>(steps));
  std::iota(times.begin(), times.end(), 1);
  const std::size_t n_events = draw.positive.size() + draw.negative.size();
  for (std::size_t i = 0; i < n_events; ++i) {
    std::swap(times[i], times[i + stream.index(times.size() - i)]);
  }

  RaterTrace trace;
  trace.terminal_noise = draw.noise;
  for (std::size_t i = 0; i < n_events; ++i) {
    const double magnitude =
        i < draw.positive.size() ? draw.positive[i] : -draw.negative[i - draw.positive.size()];
    trace.events.push_back({times[i], magnitude});
  }
  std::sort(trace.events.begin(), trace.events.end(),
            [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });

  trace.steps.reserve(static_cast<std::size_t>(steps) + 1);
  trace.steps.push_back({0, cfg.middle_score});
  double level = cfg.middle_score;
  auto event = trace.events.begin();
  for (int t = 1; t <= steps; ++t) {
    for (; event != trace.events.end() && event->time == t; ++event) level += event->magnitude;
    // The last step is summed in rater order so it matches sample_rater bit for bit.
    const double value = t == steps ? draw.score(cfg.middle_score) : level + sample_noise(cfg, stream);
    trace.steps.push_back({t, value});
  }
  return trace;
}

}  // namespace ddd
