#pragma once

#include <string>
#include <vector>

#include "ddd/dataset.hpp"
#include "ddd/metrics.hpp"

namespace ddd {

/// Dataset-level means of every distance plus binary-label agreement.
struct MetricReport {
  double ped = 0, pce = 0, pjs = 0, ced = 0, cjs = 0, pcs = 0, pkl = 0, emd = 0;
  double emd_r2 = 0;
  double rmse = 0;
  double class_acc = 0;
  std::size_t count = 0;
  double threshold = 5.0;
  double delta = 0.0;
  std::vector<std::string> missing_pred;   // truth ids without a prediction
  std::vector<std::string> missing_truth;  // prediction ids without a truth
};

struct ScoredPair {
  std::string id;
  PairMetrics metrics;
  bool label_agrees = false;
};

/// Per-pair metrics for every truth record that has a prediction, in truth order.
std::vector<ScoredPair> score_pairs(const Dataset& pred, const Dataset& truth, double threshold = 5.0,
                                    double delta = 0.0);

/// Averages score_pairs; unmatched ids are listed and excluded from the means.
MetricReport evaluate(const Dataset& pred, const Dataset& truth, double threshold = 5.0, double delta = 0.0);

/// JSON with lowercase table column keys (ped ... emd, class_acc) and the
/// definitions used for each metric. verbose adds emd_r2, rmse and per-pair rows.
std::string report_json(const MetricReport& report, bool verbose = false,
                        const std::vector<ScoredPair>* pairs = nullptr);

}  // namespace ddd
