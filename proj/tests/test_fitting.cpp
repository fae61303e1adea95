#include <doctest.h>

#include <random>

#include "ddd/dataset.hpp"
#include "ddd/fitting.hpp"
#include "ddd/metrics.hpp"
#include "oracles.hpp"

using namespace ddd;

namespace {

SimConfig bank_config(std::uint64_t seed = 1) {
  SimConfig cfg = SimConfig::for_bins(10);
  cfg.raters = 10000;
  cfg.seed = seed;
  return cfg;
}

const TemplateBank& shared_bank() {
  static const TemplateBank bank = TemplateBank::build(bank_config());
  return bank;
}

}  // namespace

TEST_CASE("rmse") {
  const Pmf p = ScoreHistogram::point_mass({1, 10}, 1).pmf();
  const Pmf q = ScoreHistogram::point_mass({1, 10}, 10).pmf();
  CHECK(rmse(p, p) == 0.0);
  CHECK(rmse(p, q) == doctest::Approx(std::sqrt(0.2)));
  CHECK(rmse(p, q) == rmse(q, p));
  CHECK_THROWS_AS(rmse(p, Pmf::Zero(7)), std::invalid_argument);
}

TEST_CASE("template bank reproduces simulate_histogram bit for bit") {
  const TemplateBank& bank = shared_bank();
  CHECK(bank.grid().size() == 49);
  CHECK(bank.matches(bank_config(), 1.0));
  CHECK_FALSE(bank.matches(bank_config(2), 1.0));
  CHECK_FALSE(bank.matches(bank_config(), 2.0));
  for (auto [m, n] : {std::pair{0, 0}, std::pair{3, 5}, std::pair{6, 6}}) {
    CHECK(bank.at(m, n) == simulate_histogram({m, n}, bank_config()));
  }
}

TEST_CASE("fit_ddd on an exact template") {
  const TemplateBank& bank = shared_bank();
  const DddFit fit = fit_ddd(ScoreHistogram::point_mass({1, 10}, 5), bank, true);
  CHECK(fit.params.m == 0);
  CHECK(fit.params.n == 0);
  CHECK(fit.distance == 0.0);
  CHECK(fit.candidates.size() == 49);

  // Every template is its own best fit up to ties, which prefer fewer attractors.
  const DddFit self = fit_ddd(bank.at(4, 1), bank);
  CHECK(self.distance == 0.0);
  CHECK(self.params.m + self.params.n <= 5);
}

TEST_CASE("ties go to the simpler process") {
  const TemplateBank& bank = shared_bank();
  // One attractor of each kind can never move a score past the rounding edge.
  REQUIRE(bank.at(1, 1) == bank.at(0, 0));
  const DddFit fit = fit_ddd(bank.at(1, 1), bank);
  CHECK(fit.params.m == 0);
  CHECK(fit.params.n == 0);
}

TEST_CASE("fit_ddd returns the argmin of its candidate table") {
  const TemplateBank& bank = shared_bank();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = oracle::random_pmf(rng, 10, 0.3);
    const ScoreHistogram target =
        ScoreHistogram::from_weights(Eigen::Map<const Eigen::VectorXd>(p.data(), 10));
    const DddFit fit = fit_ddd(target, bank, true);
    CHECK(fit.distance == rmse(target.pmf(), fit.fitted.pmf()));
    for (const Candidate& c : fit.candidates) CHECK(fit.distance <= c.rmse);
    CHECK(fit_ddd(target, bank).params == fit.params);
  }
}

TEST_CASE("fit_ddd recovers the generating process") {
  const TemplateBank& bank = shared_bank();
  std::mt19937_64 rng(2024);
  int exact = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = static_cast<int>(rng() % 7), n = static_cast<int>(rng() % 7);
    SimConfig cfg = bank_config(1000 + trial);
    const ScoreHistogram target = simulate_histogram({m, n}, cfg);
    const DddFit fit = fit_ddd(target, bank);
    CHECK(fit.distance <= rmse(target.pmf(), bank.at(m, n).pmf()));
    exact += fit.params.m == m && fit.params.n == n;
  }
  CHECK(exact >= 18);
}

TEST_CASE("fit_ddd rejects mismatched scales") {
  CHECK_THROWS_AS(fit_ddd(ScoreHistogram::point_mass({1, 7}, 4), shared_bank()), std::invalid_argument);
}

TEST_CASE("discretized gaussian") {
  SUBCASE("degenerate sigma gives a point mass") {
    const GaussianFit fit = fit_gaussian(ScoreHistogram::point_mass({1, 10}, 5));
    CHECK(fit.params.sigma == 0.0);
    CHECK(fit.fitted == ScoreHistogram::point_mass({1, 10}, 5));
    CHECK(fit.distance == 0.0);
    CHECK(discretized_gaussian({7.4, 0.0}, {1, 10}) == ScoreHistogram::point_mass({1, 10}, 7));
    CHECK(discretized_gaussian({42.0, 0.0}, {1, 10}) == ScoreHistogram::point_mass({1, 10}, 10));
  }
  SUBCASE("mass is renormalized over the scale") {
    CHECK(std::abs(discretized_gaussian({5.5, 1.5}, {1, 10}).pmf().sum() - 1.0) < 1e-9);
  }
  SUBCASE("matches a quadrature oracle") {
    for (auto [mu, sigma] : {std::pair{5.5, 1.5}, std::pair{2.2, 0.7}, std::pair{8.9, 2.5}}) {
      std::vector<double> ref(10);
      double total = 0;
      for (int b = 1; b <= 10; ++b) {
        ref[b - 1] = oracle::normal_cdf_quadrature((b + 0.5 - mu) / sigma) -
                     oracle::normal_cdf_quadrature((b - 0.5 - mu) / sigma);
        total += ref[b - 1];
      }
      const Pmf got = discretized_gaussian({mu, sigma}, {1, 10}).pmf();
      for (int k = 0; k < 10; ++k) CHECK(got(k) == doctest::Approx(ref[k] / total).epsilon(1e-8));
    }
  }
  SUBCASE("is unimodal") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> mu(1.0, 10.0), sigma(0.2, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
      const Pmf p = discretized_gaussian({mu(rng), sigma(rng)}, {1, 10}).pmf();
      Eigen::Index peak;
      p.maxCoeff(&peak);
      for (Eigen::Index k = 1; k <= peak; ++k) CHECK(p(k) >= p(k - 1) - 1e-15);
      for (Eigen::Index k = peak + 1; k < p.size(); ++k) CHECK(p(k) <= p(k - 1) + 1e-15);
    }
  }
  SUBCASE("keeps the mean of interior gaussians") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> mu(4.0, 7.0), sigma(0.5, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      const GaussianParams g{mu(rng), sigma(rng)};
      const ScoreHistogram h = discretized_gaussian(g, {1, 10});
      const std::vector<double> q(h.pmf().data(), h.pmf().data() + 10);
      CHECK(std::abs(static_cast<double>(oracle::brute_force_moments(q).mean) - g.mu) < 3e-3);
    }
  }
}

TEST_CASE("mean-score buckets") {
  const ScoreBuckets ten{{1, 10}};
  CHECK(ten.count() == 8);
  CHECK(ten.label(0) == "1-2");
  CHECK(ten.label(7) == "8-9");
  CHECK(ten.bucket_of(1.0) == 0);
  CHECK(ten.bucket_of(1.999) == 0);
  CHECK(ten.bucket_of(2.0) == 1);
  CHECK(ten.bucket_of(4.5) == 3);
  CHECK(ten.bucket_of(9.7) == 7);
  CHECK(ten.bucket_of(10.0) == 7);
  const ScoreBuckets seven{{1, 7}};
  CHECK(seven.count() == 5);
  CHECK(seven.label(4) == "5-6");
  CHECK(seven.bucket_of(6.9) == 4);
}

TEST_CASE("fit report on synthetic data") {
  const TemplateBank& bank = shared_bank();
  const SynthDataset synth = synth_dataset(SynthSpec::full_grid(6, 6, 1.0, 2000, 2), 55);
  std::vector<FitComparison> fits;
  for (const DatasetRecord& r : synth.dataset.records) fits.push_back(compare_fits(r.id, r.histogram, bank));
  const FitReport report = summarize_fits(fits, {1, 10});

  REQUIRE(report.buckets.size() == 9);
  CHECK(report.buckets.front().label == "1-2");
  CHECK(report.buckets[7].label == "8-9");
  CHECK(report.buckets.back().label == "all");
  CHECK(report.buckets.back().count == 98);

  std::size_t bucketed = 0;
  for (std::size_t b = 0; b + 1 < report.buckets.size(); ++b) {
    const BucketError& e = report.buckets[b];
    bucketed += e.count;
    CHECK(e.gaussian_rmse.has_value() == (e.count > 0));
  }
  CHECK(bucketed == 98);
  CHECK_FALSE(report.buckets.front().ddd_rmse.has_value());  // no synthetic mean falls below 2 at scale 1
  CHECK(*report.buckets.back().ddd_rmse <= *report.buckets.back().gaussian_rmse);
  CHECK(report.mean.count == 98);
  CHECK(report.skew.count <= 98);
}

TEST_CASE("scale calibration prefers the generating scale") {
  SimConfig gen = bank_config(300);
  gen.raters = 5000;
  std::vector<ScoreHistogram> targets;
  for (auto [m, n] : {std::pair{5, 1}, std::pair{2, 4}, std::pair{6, 3}, std::pair{0, 5}}) {
    targets.push_back(simulate_histogram({m, n, 2.0}, gen));
  }
  const std::vector<double> scales{1.0, 2.0, 4.0};
  const auto scores = calibrate_scale(targets, bank_config(), scales);
  REQUIRE(scores.size() == 3);
  CHECK(scores[1].mean_rmse < scores[0].mean_rmse);
  CHECK(scores[1].mean_rmse < scores[2].mean_rmse);
}
