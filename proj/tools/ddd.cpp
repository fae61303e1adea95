// Command-line front end: simulate, fit, eval, compare-gaussian, skmap, synth, calibrate.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid flags or input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ddd/dataset.hpp"
#include "ddd/evaluation.hpp"
#include "ddd/fitting.hpp"
#include "ddd/moments.hpp"
#include "ddd/parallel.hpp"
#include "ddd/simulator.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace ddd;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct SimFlags {
  int bins = 10;
  std::int64_t raters = 1000;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::optional<double> middle;
  double noise = 0.015;

  [[nodiscard]] SimConfig config() const {
    SimConfig cfg = SimConfig::for_bins(bins);
    cfg.raters = raters;
    cfg.seed = seed;
    cfg.noise_amp = noise;
    if (middle) cfg.middle_score = *middle;
    cfg.validate();
    return cfg;
  }
};

void add_sim_flags(CLI::App* cmd, SimFlags& f, bool seed_required, std::int64_t default_raters) {
  f.raters = default_raters;
  cmd->add_option("--bins", f.bins, "Number of score bins (1..K scale)")->check(CLI::Range(2, 100));
  cmd->add_option("--raters", f.raters, "Raters simulated per histogram")->check(CLI::PositiveNumber);
  auto* seed = cmd->add_option("--seed", f.seed, "Random seed");
  if (seed_required) seed->required();
  cmd->add_option("--scale", f.scale, "Multiplier on every attractor magnitude")->check(CLI::PositiveNumber);
  cmd->add_option("--middle", f.middle, "Starting score (default 5 on 10 bins, 4 on 7 bins)");
  cmd->add_option("--noise", f.noise, "White-noise amplitude")->check(CLI::NonNegativeNumber);
}

struct InputFlags {
  std::string path;
  std::string format = "csv";
  std::string split;
};

void add_input_flags(CLI::App* cmd, InputFlags& f, const std::string& name = "--input") {
  cmd->add_option(name, f.path, "Histogram file")->required();
  cmd->add_option(name + "-format", f.format, "csv (id,c1..cK), ava, or photonet")
      ->check(CLI::IsMember({"csv", "ava", "photonet"}));
  cmd->add_option(name + "-split", f.split, "Split file; only test records are used when given");
}

Dataset load(const InputFlags& f, int bins) {
  Dataset ds;
  if (f.format == "ava") {
    ds = parse_ava(fs::path(f.path));
  } else if (f.format == "photonet") {
    ds = parse_photonet(fs::path(f.path));
  } else {
    ds = parse_histogram_csv(fs::path(f.path), bins);
  }
  if (ds.bins.size() != bins) {
    throw std::invalid_argument(fmt::format("{} has {} bins, expected {}", f.path, ds.bins.size(), bins));
  }
  if (!f.split.empty()) {
    ds = apply_split(std::move(ds), fs::path(f.split));
    std::erase_if(ds.records, [](const DatasetRecord& r) { return r.split != Split::test; });
  }
  for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  return ds;
}

// Writes through `write` to the path, or to stdout when the path is empty or "-".
template <typename Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw IoError("failed writing " + path);
}

std::string optional_cell(const std::optional<double>& v, const char* spec = "{:.4f}") {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string();
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  SimFlags sim;
  int m = 0, n = 0;
  bool grid = false, trace = false;
  int m_max = 6, n_max = 6;
  int steps = 20;
  std::string out, out_dir, svg;
};

void cmd_simulate(const SimulateArgs& a) {
  const SimConfig cfg = a.sim.config();

  if (a.grid) {
    if (a.out_dir.empty()) throw std::invalid_argument("--grid needs --out-dir");
    const SimulationGrid grid = simulate_grid(cfg, a.m_max, a.n_max, a.sim.scale);
    fs::create_directories(a.out_dir);
    std::ostringstream index;
    index << "m,n,file,mean,std\n";
    for (int m = 0; m <= a.m_max; ++m) {
      for (int n = 0; n <= a.n_max; ++n) {
        const std::string file = fmt::format("cell_m{}_n{}.csv", m, n);
        const ScoreHistogram& h = grid.at(m, n);
        Dataset one;
        one.records.push_back({fmt::format("m{}_n{}", m, n), h, Split::unassigned, {}});
        emit((fs::path(a.out_dir) / file).string(), [&](std::ostream& o) { write_counts_csv(o, one); });
        const MomentSet mom = moments(h);
        index << fmt::format("{},{},{},{:.6f},{:.6f}\n", m, n, file, mom.mean, mom.std);
      }
    }
    emit((fs::path(a.out_dir) / "index.csv").string(), [&](std::ostream& o) { o << index.str(); });
    return;
  }

  const DddParams params{a.m, a.n, a.sim.scale};
  params.validate(a.m_max, a.n_max);

  if (a.trace) {
    const RaterTrace trace = sample_trace(params, cfg, a.steps);
    emit(a.out, [&](std::ostream& o) {
      o << "time,value,event\n";
      auto event = trace.events.begin();
      for (const TraceStep& s : trace.steps) {
        o << fmt::format("{},{:.6f},", s.time, s.value);
        if (event != trace.events.end() && event->time == s.time) o << fmt::format("{:.6f}", (event++)->magnitude);
        o << '\n';
      }
    });
    return;
  }

  const ScoreHistogram h = simulate_histogram(params, cfg);
  Dataset one;
  one.records.push_back({fmt::format("m{}_n{}", a.m, a.n), h, Split::unassigned, {}});
  emit(a.out, [&](std::ostream& o) { write_counts_csv(o, one); });
  if (!a.svg.empty()) {
    emit(a.svg, [&](std::ostream& o) { tools::write_histogram_svg(o, h, fmt::format("m={} n={}", a.m, a.n)); });
  }
}

// ---------------------------------------------------------------------------

struct FitArgs {
  SimFlags sim;
  InputFlags input;
  int m_max = 6, n_max = 6;
  std::string out, candidates, fitted;
};

void cmd_fit(const FitArgs& a) {
  const SimConfig cfg = a.sim.config();
  const Dataset ds = load(a.input, a.sim.bins);
  const TemplateBank bank = TemplateBank::build(cfg, a.sim.scale, a.m_max, a.n_max);

  const bool want_candidates = !a.candidates.empty();
  std::vector<DddFit> fits(ds.records.size());
  parallel_for(fits.size(), [&](std::size_t i) { fits[i] = fit_ddd(ds.records[i].histogram, bank, want_candidates); });

  emit(a.out, [&](std::ostream& o) {
    o << "id,m,n,rmse\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
      o << fmt::format("{},{},{},{:.10f}\n", ds.records[i].id, fits[i].params.m, fits[i].params.n, fits[i].distance);
    }
  });
  if (want_candidates) {
    emit(a.candidates, [&](std::ostream& o) {
      o << "id,m,n,rmse\n";
      for (std::size_t i = 0; i < fits.size(); ++i) {
        for (const Candidate& c : fits[i].candidates) {
          o << fmt::format("{},{},{},{:.10f}\n", ds.records[i].id, c.m, c.n, c.rmse);
        }
      }
    });
  }
  if (!a.fitted.empty()) {
    std::vector<std::pair<std::string, ScoreHistogram>> rows;
    for (std::size_t i = 0; i < fits.size(); ++i) rows.emplace_back(ds.records[i].id, fits[i].fitted);
    emit(a.fitted, [&](std::ostream& o) { write_pmf_csv(o, rows); });
  }
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  SimFlags sim;
  std::string pred, pred_params;
  InputFlags truth;
  double threshold = 5.0, delta = 0.0;
  bool verbose = false;
  std::string out;
};

void cmd_eval(const EvalArgs& a) {
  const Dataset truth = load(a.truth, a.sim.bins);
  Dataset pred;
  if (!a.pred_params.empty()) {
    const TemplateBank bank = TemplateBank::build(a.sim.config(), a.sim.scale);
    pred.bins = bank.bins();
    for (const ParamRow& row : parse_params_csv(fs::path(a.pred_params))) {
      if (row.m > bank.grid().m_max() || row.n > bank.grid().n_max()) {
        throw std::invalid_argument(fmt::format("{}: (m, n) = ({}, {}) outside the template grid", row.id, row.m, row.n));
      }
      pred.records.push_back({row.id, bank.at(row.m, row.n), Split::unassigned, {}});
    }
  } else {
    pred = parse_histogram_csv(fs::path(a.pred), a.sim.bins);
  }

  const MetricReport report = evaluate(pred, truth, a.threshold, a.delta);
  std::vector<ScoredPair> pairs;
  if (a.verbose) pairs = score_pairs(pred, truth, a.threshold, a.delta);
  emit(a.out, [&](std::ostream& o) { o << report_json(report, a.verbose, a.verbose ? &pairs : nullptr); });
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  SimFlags sim;
  InputFlags input;
  std::string table1, table2;
};

void cmd_compare(const CompareArgs& a) {
  const SimConfig cfg = a.sim.config();
  const Dataset ds = load(a.input, a.sim.bins);
  const TemplateBank bank = TemplateBank::build(cfg, a.sim.scale);

  std::vector<FitComparison> fits(ds.records.size());
  parallel_for(fits.size(), [&](std::size_t i) { fits[i] = compare_fits(ds.records[i].id, ds.records[i].histogram, bank); });
  const FitReport report = summarize_fits(fits, ds.bins);

  std::ostringstream t1;
  t1 << "method";
  for (const BucketError& b : report.buckets) t1 << ',' << b.label;
  t1 << "\nGaussian";
  for (const BucketError& b : report.buckets) t1 << ',' << optional_cell(b.gaussian_rmse);
  t1 << "\nDDD";
  for (const BucketError& b : report.buckets) t1 << ',' << optional_cell(b.ddd_rmse);
  t1 << "\ncount";
  for (const BucketError& b : report.buckets) t1 << ',' << b.count;
  t1 << '\n';

  std::ostringstream t2;
  t2 << "method,mean_mse,std_mse,skew_mse,kurt_mse\n";
  t2 << fmt::format("Gaussian,{:.6g},{:.6g},{:.6g},{:.6g}\n", report.mean.gaussian, report.std.gaussian,
                    report.skew.gaussian, report.kurt.gaussian);
  t2 << fmt::format("DDD,{:.6g},{:.6g},{:.6g},{:.6g}\n", report.mean.ddd, report.std.ddd, report.skew.ddd,
                    report.kurt.ddd);
  t2 << fmt::format("count,{},{},{},{}\n", report.mean.count, report.std.count, report.skew.count, report.kurt.count);

  if (!a.table1.empty()) emit(a.table1, [&](std::ostream& o) { o << t1.str(); });
  if (!a.table2.empty()) emit(a.table2, [&](std::ostream& o) { o << t2.str(); });

  // Human-readable summary on stdout.
  std::cout << fmt::format("{:<10}", "RMSE");
  for (const BucketError& b : report.buckets) std::cout << fmt::format("{:>9}", b.label);
  std::cout << '\n';
  const auto row = [&](const char* name, auto pick) {
    std::cout << fmt::format("{:<10}", name);
    for (const BucketError& b : report.buckets) {
      const auto v = pick(b);
      std::cout << fmt::format("{:>9}", v ? fmt::format("{:.4f}", *v) : std::string("-"));
    }
    std::cout << '\n';
  };
  row("Gaussian", [](const BucketError& b) { return b.gaussian_rmse; });
  row("DDD", [](const BucketError& b) { return b.ddd_rmse; });
  std::cout << fmt::format("\n{:<10}{:>12}{:>12}{:>12}{:>12}\n", "MSE", "mean", "std", "skew", "kurt");
  std::cout << fmt::format("{:<10}{:>12.4g}{:>12.4g}{:>12.4g}{:>12.4g}\n", "Gaussian", report.mean.gaussian,
                           report.std.gaussian, report.skew.gaussian, report.kurt.gaussian);
  std::cout << fmt::format("{:<10}{:>12.4g}{:>12.4g}{:>12.4g}{:>12.4g}\n", "DDD", report.mean.ddd, report.std.ddd,
                           report.skew.ddd, report.kurt.ddd);
  std::cout << fmt::format("\nDDD RMSE <= Gaussian RMSE on {}/{} records\n", report.ddd_not_worse, report.records);
}

// ---------------------------------------------------------------------------

struct SkmapArgs {
  int bins = 10;
  InputFlags input;
  std::string out, boundary;
  double s_max = 4.0;
  int samples = 161;
};

void cmd_skmap(const SkmapArgs& a) {
  const Dataset ds = load(a.input, a.bins);
  const ScoreBuckets buckets{ds.bins};
  std::size_t skipped = 0;
  emit(a.out, [&](std::ostream& o) {
    o << "id,skew,kurt,bucket\n";
    for (const DatasetRecord& r : ds.records) {
      const MomentSet m = moments(r.histogram);
      if (m.degenerate()) {
        ++skipped;
        continue;
      }
      o << fmt::format("{},{:.6f},{:.6f},{}\n", r.id, *m.skew, *m.kurt, buckets.label(buckets.bucket_of(m.mean)));
    }
  });
  if (skipped > 0) std::cerr << "skipped " << skipped << " zero-variance histograms\n";
  if (!a.boundary.empty()) {
    emit(a.boundary, [&](std::ostream& o) {
      o << "skew,kurt\n";
      for (int i = 0; i < a.samples; ++i) {
        const double s = a.samples == 1 ? 0.0 : -a.s_max + 2.0 * a.s_max * i / (a.samples - 1);
        o << fmt::format("{:.6f},{:.6f}\n", s, s * s + 1.0);
      }
    });
  }
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::uint64_t seed = 0;
  int bins = 10;
  int m_max = 6, n_max = 6, per_cell = 10;
  std::int64_t raters = 10000;
  double scale = 1.0;
  std::string spec, out, truth, manifest;
};

SynthSpec read_synth_spec(const std::string& path, int bins) {
  std::ifstream in = open_input(path);
  SynthSpec spec;
  spec.bins = bins;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty() || line.front() == '#' || line.rfind("m,", 0) == 0) continue;
    std::istringstream row(line);
    SynthCell c;
    char comma = 0;
    if (!(row >> c.m >> comma >> c.n >> comma >> c.scale >> comma >> c.raters >> comma >> c.count)) {
      throw ParseError(path, line_no, "expected `m,n,scale,raters,count`");
    }
    spec.cells.push_back(c);
  }
  return spec;
}

void cmd_synth(const SynthArgs& a) {
  const SynthSpec spec = a.spec.empty() ? SynthSpec::full_grid(a.m_max, a.n_max, a.scale, a.raters, a.per_cell, a.bins)
                                        : read_synth_spec(a.spec, a.bins);
  const SynthDataset synth = synth_dataset(spec, a.seed);
  emit(a.out, [&](std::ostream& o) { write_counts_csv(o, synth.dataset); });
  if (!a.truth.empty()) {
    emit(a.truth, [&](std::ostream& o) {
      o << "id,m,n\n";
      write_params_csv(o, synth.truth);
    });
  }
  if (!a.manifest.empty()) emit(a.manifest, [&](std::ostream& o) { o << manifest_json(make_manifest(synth.dataset)); });
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
  SimFlags sim;
  InputFlags input;
  std::vector<double> scales{0.5, 1.0, 2.0, 4.0};
  std::string out;
};

void cmd_calibrate(const CalibrateArgs& a) {
  const Dataset ds = load(a.input, a.sim.bins);
  const std::vector<ScoreHistogram> targets = ds.histograms();
  const std::vector<ScaleScore> scores = calibrate_scale(targets, a.sim.config(), a.scales);
  emit(a.out, [&](std::ostream& o) {
    o << "scale,mean_rmse\n";
    for (const ScaleScore& s : scores) o << fmt::format("{:.6g},{:.10f}\n", s.scale, s.mean_rmse);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-diffusion modelling of rating score distributions"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate rater histograms, the (m, n) grid, or one rater trace");
  add_sim_flags(simulate, sim.sim, true, 1000);
  simulate->add_option("--m", sim.m, "Positive attractors")->check(CLI::NonNegativeNumber);
  simulate->add_option("--n", sim.n, "Negative attractors")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--grid", sim.grid, "Simulate every (m, n) cell");
  simulate->add_option("--m-max", sim.m_max, "Largest m in the grid, also the bound for --m")->check(CLI::NonNegativeNumber);
  simulate->add_option("--n-max", sim.n_max, "Largest n in the grid, also the bound for --n")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out-dir", sim.out_dir, "Directory for grid cell CSVs and index.csv");
  simulate->add_flag("--trace", sim.trace, "Emit one rater trajectory");
  simulate->add_option("--steps", sim.steps, "Trace length")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "Output CSV (stdout by default)");
  simulate->add_option("--svg", sim.svg, "Also draw the histogram as SVG");
  simulate->callback([&] { cmd_simulate(sim); });

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit (m, n) to each histogram by exhaustive search");
  add_sim_flags(fit_cmd, fit.sim, true, 10000);
  add_input_flags(fit_cmd, fit.input);
  fit_cmd->add_option("--m-max", fit.m_max, "Largest m searched")->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--n-max", fit.n_max, "Largest n searched")->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--out", fit.out, "Output `id,m,n,rmse` CSV (stdout by default)");
  fit_cmd->add_option("--candidates", fit.candidates, "Write every candidate's RMSE here");
  fit_cmd->add_option("--fitted", fit.fitted, "Write fitted pmfs (`id,p1..pK`) here");
  fit_cmd->callback([&] { cmd_fit(fit); });

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score predicted distributions against ground truth");
  add_sim_flags(eval, ev.sim, false, 10000);
  auto* pred_opt = eval->add_option("--pred", ev.pred, "Predicted histograms (`id,p1..pK` or counts)");
  auto* params_opt = eval->add_option("--pred-params", ev.pred_params, "Predicted `id,m,n` rows, expanded via templates");
  pred_opt->excludes(params_opt);
  add_input_flags(eval, ev.truth, "--truth");
  eval->add_option("--threshold", ev.threshold, "High/low cut on the mean score");
  eval->add_option("--delta", ev.delta, "Margin added to the threshold")->check(CLI::NonNegativeNumber);
  eval->add_flag("--verbose", ev.verbose, "Include emd with r = 2, rmse and per-pair rows");
  eval->add_option("--out", ev.out, "Output JSON report (stdout by default)");
  eval->callback([&] {
    if (ev.pred.empty() && ev.pred_params.empty()) throw std::invalid_argument("one of --pred or --pred-params is required");
    if (!ev.pred_params.empty() && eval->count("--seed") == 0) throw std::invalid_argument("--pred-params needs --seed");
    cmd_eval(ev);
  });

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare-gaussian", "Compare Gaussian and DDD fit errors");
  add_sim_flags(compare, cmp.sim, true, 10000);
  add_input_flags(compare, cmp.input);
  compare->add_option("--table1", cmp.table1, "RMSE per mean-score bucket CSV");
  compare->add_option("--table2", cmp.table2, "Moment MSE CSV");
  compare->callback([&] { cmd_compare(cmp); });

  SkmapArgs sk;
  auto* skmap = app.add_subcommand("skmap", "Skewness-kurtosis points per histogram");
  skmap->add_option("--bins", sk.bins, "Number of score bins")->check(CLI::Range(2, 100));
  add_input_flags(skmap, sk.input);
  skmap->add_option("--out", sk.out, "Output `id,skew,kurt,bucket` CSV (stdout by default)");
  skmap->add_option("--boundary", sk.boundary, "Samples of the bound K = S^2 + 1");
  skmap->add_option("--s-max", sk.s_max, "Boundary skewness range [-s, s]")->check(CLI::PositiveNumber);
  skmap->add_option("--samples", sk.samples, "Boundary sample count")->check(CLI::PositiveNumber);
  skmap->callback([&] { cmd_skmap(sk); });

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known (m, n)");
  synth->add_option("--seed", sy.seed, "Random seed")->required();
  synth->add_option("--bins", sy.bins, "Number of score bins")->check(CLI::Range(2, 100));
  synth->add_option("--m-max", sy.m_max, "Largest m")->check(CLI::NonNegativeNumber);
  synth->add_option("--n-max", sy.n_max, "Largest n")->check(CLI::NonNegativeNumber);
  synth->add_option("--per-cell", sy.per_cell, "Images per (m, n) cell")->check(CLI::NonNegativeNumber);
  synth->add_option("--raters", sy.raters, "Raters per image")->check(CLI::PositiveNumber);
  synth->add_option("--scale", sy.scale, "Attractor scale")->check(CLI::PositiveNumber);
  synth->add_option("--spec", sy.spec, "Cell list `m,n,scale,raters,count` (overrides the grid flags)");
  synth->add_option("--out", sy.out, "Counts CSV (stdout by default)");
  synth->add_option("--truth", sy.truth, "True `id,m,n` sidecar");
  synth->add_option("--manifest", sy.manifest, "Dataset manifest JSON");
  synth->callback([&] { cmd_synth(sy); });

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Mean DDD fit RMSE for candidate attractor scales");
  add_sim_flags(calibrate, cal.sim, true, 10000);
  add_input_flags(calibrate, cal.input);
  calibrate->add_option("--scales", cal.scales, "Candidate scales")->delimiter(',')->check(CLI::PositiveNumber);
  calibrate->add_option("--out", cal.out, "Output CSV (stdout by default)");
  calibrate->callback([&] { cmd_calibrate(cal); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
