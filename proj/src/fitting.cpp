#include "ddd/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddd/metrics.hpp"
#include "ddd/parallel.hpp"

namespace ddd {

TemplateBank TemplateBank::build(const SimConfig& cfg, double scale, int m_max, int n_max) {
  cfg.validate();
  Fingerprint fp{cfg.seed,      cfg.raters,     scale,         cfg.bins,
                 cfg.middle_score, cfg.noise_amp, cfg.attr_coeff, cfg.attr_rate,
                 cfg.attr_umax, m_max,          n_max};
  return TemplateBank(fp, simulate_grid(cfg, m_max, n_max, scale));
}

bool TemplateBank::matches(const SimConfig& cfg, double scale) const {
  const Fingerprint& fp = fingerprint_;
  return fp.seed == cfg.seed && fp.raters == cfg.raters && fp.scale == scale && fp.bins == cfg.bins &&
         fp.middle_score == cfg.middle_score && fp.noise_amp == cfg.noise_amp &&
         fp.attr_coeff == cfg.attr_coeff && fp.attr_rate == cfg.attr_rate && fp.attr_umax == cfg.attr_umax;
}

DddFit fit_ddd(const ScoreHistogram& target, const TemplateBank& bank, bool with_candidates) {
  if (target.bins() != bank.bins()) throw std::invalid_argument("target and template bins differ");

  DddFit best;
  best.distance = std::numeric_limits<double>::infinity();
  const auto simpler = [](int m, int n, const DddParams& than) {
    const int complexity = m + n;
    const int other = than.m + than.n;
    return complexity < other || (complexity == other && n < than.n);
  };

  const SimulationGrid& grid = bank.grid();
  for (int m = 0; m <= grid.m_max(); ++m) {
    for (int n = 0; n <= grid.n_max(); ++n) {
      const double d = rmse(target.pmf(), grid.at(m, n).pmf());
      if (with_candidates) best.candidates.push_back({m, n, d});
      if (d < best.distance || (d == best.distance && simpler(m, n, best.params))) {
        best.distance = d;
        best.params = {m, n, bank.fingerprint().scale};
      }
    }
  }
  best.fitted = grid.at(best.params.m, best.params.n);
  return best;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

ScoreHistogram discretized_gaussian(const GaussianParams& params, BinRange bins) {
  if (!std::isfinite(params.mu) || !(params.sigma >= 0.0)) {
    throw std::invalid_argument("gaussian needs finite mu and non-negative sigma");
  }
  if (params.sigma == 0.0) {
    const double nearest = std::clamp(std::nearbyint(params.mu), double(bins.first), double(bins.last));
    return ScoreHistogram::point_mass(bins, static_cast<int>(nearest));
  }

  Pmf mass(bins.size());
  for (int k = 0; k < bins.size(); ++k) {
    const double b = bins.first + k;
    mass(k) = normal_cdf((b + 0.5 - params.mu) / params.sigma) - normal_cdf((b - 0.5 - params.mu) / params.sigma);
  }
  if (!(mass.sum() > 0.0)) {
    // Far outside the scale every interval underflows; all the mass sits on the nearest edge.
    return ScoreHistogram::point_mass(bins, params.mu < bins.first ? bins.first : bins.last);
  }
  return ScoreHistogram::from_weights(std::move(mass), bins.first);
}

GaussianFit fit_gaussian(const ScoreHistogram& target) {
  const MomentSet m = moments(target);
  GaussianFit fit;
  fit.params = {m.mean, m.std};
  fit.fitted = discretized_gaussian(fit.params, target.bins());
  fit.distance = rmse(target.pmf(), fit.fitted.pmf());
  return fit;
}

int ScoreBuckets::bucket_of(double mean) const noexcept {
  const int b = static_cast<int>(std::floor(mean - bins.first));
  return std::clamp(b, 0, count() - 1);
}

std::string ScoreBuckets::label(int bucket) const {
  return std::to_string(bins.first + bucket) + "-" + std::to_string(bins.first + bucket + 1);
}

FitComparison compare_fits(const std::string& id, const ScoreHistogram& target, const TemplateBank& bank) {
  FitComparison c;
  c.id = id;
  c.target_moments = moments(target);
  c.target_mean = c.target_moments.mean;
  c.bucket = ScoreBuckets{target.bins()}.bucket_of(c.target_mean);
  c.gaussian = fit_gaussian(target);
  c.ddd = fit_ddd(target, bank);
  return c;
}

namespace {

void accumulate(MomentError& acc, std::optional<double> target, std::optional<double> gaussian,
                std::optional<double> ddd) {
  if (!target || !gaussian || !ddd) return;
  acc.gaussian += (*gaussian - *target) * (*gaussian - *target);
  acc.ddd += (*ddd - *target) * (*ddd - *target);
  ++acc.count;
}

void finish(MomentError& acc) {
  if (acc.count == 0) return;
  acc.gaussian /= static_cast<double>(acc.count);
  acc.ddd /= static_cast<double>(acc.count);
}

}  // namespace

FitReport summarize_fits(std::span<const FitComparison> fits, BinRange bins) {
  const ScoreBuckets buckets{bins};
  const auto n_buckets = static_cast<std::size_t>(buckets.count());
  std::vector<double> g_sum(n_buckets + 1, 0.0), d_sum(n_buckets + 1, 0.0);
  std::vector<std::size_t> count(n_buckets + 1, 0);

  FitReport report;
  report.records = fits.size();
  for (const FitComparison& f : fits) {
    const auto slots = {static_cast<std::size_t>(f.bucket), n_buckets};
    for (std::size_t slot : slots) {
      g_sum[slot] += f.gaussian.distance;
      d_sum[slot] += f.ddd.distance;
      ++count[slot];
    }
    if (f.ddd.distance <= f.gaussian.distance) ++report.ddd_not_worse;

    const MomentSet g = moments(f.gaussian.fitted);
    const MomentSet d = moments(f.ddd.fitted);
    const MomentSet& t = f.target_moments;
    accumulate(report.mean, t.mean, g.mean, d.mean);
    accumulate(report.std, t.std, g.std, d.std);
    accumulate(report.skew, t.skew, g.skew, d.skew);
    accumulate(report.kurt, t.excess_kurt, g.excess_kurt, d.excess_kurt);
  }
  for (MomentError* e : {&report.mean, &report.std, &report.skew, &report.kurt}) finish(*e);

  for (std::size_t b = 0; b <= n_buckets; ++b) {
    BucketError e;
    e.label = b == n_buckets ? "all" : buckets.label(static_cast<int>(b));
    e.count = count[b];
    if (count[b] > 0) {
      e.gaussian_rmse = g_sum[b] / static_cast<double>(count[b]);
      e.ddd_rmse = d_sum[b] / static_cast<double>(count[b]);
    }
    report.buckets.push_back(std::move(e));
  }
  return report;
}

}  // namespace ddd

namespace ddd {

std::vector<ScaleScore> calibrate_scale(std::span<const ScoreHistogram> targets, const SimConfig& cfg,
                                        std::span<const double> scales) {
  if (targets.empty()) throw std::invalid_argument("calibration needs at least one target");
  std::vector<ScaleScore> out;
  for (double scale : scales) {
    const TemplateBank bank = TemplateBank::build(cfg, scale);
    std::vector<double> distance(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) { distance[i] = fit_ddd(targets[i], bank).distance; });
    double sum = 0.0;
    for (double d : distance) sum += d;
    out.push_back({scale, sum / static_cast<double>(targets.size())});
  }
  return out;
}

}  // namespace ddd
