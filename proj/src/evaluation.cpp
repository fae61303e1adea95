#include "ddd/evaluation.hpp"

#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ddd/moments.hpp"
#include "ddd/parallel.hpp"

namespace ddd {

std::vector<ScoredPair> score_pairs(const Dataset& pred, const Dataset& truth, double threshold, double delta) {
  std::unordered_map<std::string, const DatasetRecord*> by_id;
  for (const DatasetRecord& r : pred.records) by_id.emplace(r.id, &r);

  std::vector<std::pair<const DatasetRecord*, const DatasetRecord*>> matched;
  for (const DatasetRecord& t : truth.records) {
    if (const auto it = by_id.find(t.id); it != by_id.end()) matched.emplace_back(&t, it->second);
  }

  std::vector<ScoredPair> out(matched.size());
  parallel_for(matched.size(), [&](std::size_t i) {
    const auto& [t, p] = matched[i];
    if (t->histogram.size() != p->histogram.size()) {
      throw std::invalid_argument("record " + t->id + ": prediction and truth differ in bin count");
    }
    out[i].id = t->id;
    out[i].metrics = pair_metrics(t->histogram.pmf(), p->histogram.pmf());
    out[i].label_agrees =
        classify(t->histogram, threshold, delta).label == classify(p->histogram, threshold, delta).label;
  });
  return out;
}

MetricReport evaluate(const Dataset& pred, const Dataset& truth, double threshold, double delta) {
  MetricReport report;
  report.threshold = threshold;
  report.delta = delta;

  for (const DatasetRecord& t : truth.records) {
    if (pred.find(t.id) == nullptr) report.missing_pred.push_back(t.id);
  }
  for (const DatasetRecord& p : pred.records) {
    if (truth.find(p.id) == nullptr) report.missing_truth.push_back(p.id);
  }

  const std::vector<ScoredPair> pairs = score_pairs(pred, truth, threshold, delta);
  std::size_t agree = 0;
  for (const ScoredPair& s : pairs) {
    const PairMetrics& m = s.metrics;
    report.ped += m.ped;
    report.pce += m.pce;
    report.pjs += m.pjs;
    report.ced += m.ced;
    report.cjs += m.cjs;
    report.pcs += m.pcs;
    report.pkl += m.pkl;
    report.emd += m.emd;
    report.emd_r2 += m.emd_r2;
    report.rmse += m.rmse;
    if (s.label_agrees) ++agree;
  }
  report.count = pairs.size();
  if (report.count > 0) {
    const auto n = static_cast<double>(report.count);
    for (double* f : {&report.ped, &report.pce, &report.pjs, &report.ced, &report.cjs, &report.pcs, &report.pkl,
                      &report.emd, &report.emd_r2, &report.rmse}) {
      *f /= n;
    }
    report.class_acc = static_cast<double>(agree) / n;
  }
  return report;
}

std::string report_json(const MetricReport& r, bool verbose, const std::vector<ScoredPair>* pairs) {
  nlohmann::ordered_json j;
  j["ped"] = r.ped;
  j["pce"] = r.pce;
  j["pjs"] = r.pjs;
  j["ced"] = r.ced;
  j["cjs"] = r.cjs;
  j["pcs"] = r.pcs;
  j["pkl"] = r.pkl;
  j["emd"] = r.emd;
  j["class_acc"] = r.class_acc;
  j["count"] = r.count;
  if (verbose) {
    j["emd_r2"] = r.emd_r2;
    j["rmse"] = r.rmse;
  }
  j["classification"] = {{"threshold", r.threshold}, {"delta", r.delta}};
  j["definitions"] = {
      {"ped", "euclidean distance between pmfs"},
      {"pce", "cross entropy -sum p ln q, q floored at 1e-6"},
      {"pjs", "jensen-shannon divergence of pmfs (nats)"},
      {"ced", "euclidean distance between cdfs"},
      {"cjs", "jensen-shannon summand over cdf values (nats)"},
      {"pcs", "chebyshev distance between pmfs"},
      {"pkl", "kl(truth || pred), floored at 1e-6 (nats)"},
      {"emd", "((1/K) sum |P_k - Q_k|^r)^(1/r) on cdfs, r = 1"},
  };
  j["exceptions"] = {{"missing_prediction", r.missing_pred}, {"missing_truth", r.missing_truth}};
  if (verbose && pairs != nullptr) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ScoredPair& s : *pairs) {
      const PairMetrics& m = s.metrics;
      rows.push_back({{"id", s.id}, {"ped", m.ped}, {"pce", m.pce}, {"pjs", m.pjs}, {"ced", m.ced},
                      {"cjs", m.cjs}, {"pcs", m.pcs}, {"pkl", m.pkl}, {"emd", m.emd}, {"emd_r2", m.emd_r2},
                      {"rmse", m.rmse}, {"label_agrees", s.label_agrees}});
    }
    j["pairs"] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

}  // namespace ddd
