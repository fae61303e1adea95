#include <doctest.h>

#include <unistd.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "cli_support.hpp"
#include "ddd/dataset.hpp"

namespace fs = std::filesystem;
using cli::read;
using cli::run;

TEST_CASE("help and flag validation") {
  CHECK(run("--help") == 0);
  CHECK(run("simulate --help") == 0);
  CHECK(run("") == 2);
  CHECK(run("simulate --seed 1 --bogus") == 2);
  CHECK(run("simulate --m 3") == 2);  // seed is mandatory
  CHECK(run("simulate --seed 1 --m 9") == 2);
  CHECK(run("simulate --seed 1 --raters 0") == 2);
  CHECK(run("fit --seed 1 --input /nonexistent/file.csv") == 1);
}

TEST_CASE("help documents every flag") {
  const fs::path dir = cli::scratch("help");
  REQUIRE(std::system((cli::kBinary + " fit --help > " + (dir / "fit.txt").string()).c_str()) == 0);
  const std::string help = read(dir / "fit.txt");
  for (const char* flag : {"--input", "--bins", "--raters", "--seed", "--scale", "--out", "--candidates", "--fitted"}) {
    CHECK(help.find(flag) != std::string::npos);
  }
}

TEST_CASE("simulate writes one histogram, a grid, or a trace") {
  const fs::path dir = cli::scratch("simulate");

  REQUIRE(run("simulate --m 3 --n 3 --raters 1000 --seed 7 --out " + (dir / "h.csv").string() + " --svg " +
              (dir / "h.svg").string()) == 0);
  const ddd::Dataset one = ddd::parse_histogram_csv(dir / "h.csv", 10);
  REQUIRE(one.records.size() == 1);
  CHECK(one.records[0].histogram.total_votes() == 1000);
  CHECK(read(dir / "h.svg").find("viewBox=\"0 0 400 300\"") != std::string::npos);

  REQUIRE(run("simulate --grid --seed 7 --raters 500 --out-dir " + (dir / "grid").string()) == 0);
  int csvs = 0;
  for (const auto& e : fs::directory_iterator(dir / "grid")) csvs += e.path().filename().string().starts_with("cell_");
  CHECK(csvs == 49);
  const std::string index = read(dir / "grid" / "index.csv");
  CHECK(std::count(index.begin(), index.end(), '\n') == 50);

  REQUIRE(run("simulate --trace --m 3 --n 3 --seed 7 --out " + (dir / "t.csv").string()) == 0);
  std::istringstream trace(read(dir / "t.csv"));
  std::string line;
  int events = 0;
  std::getline(trace, line);
  while (std::getline(trace, line)) events += line.back() != ',';
  CHECK(events == 6);
}

TEST_CASE("outputs are reproducible byte for byte") {
  const fs::path dir = cli::scratch("repro");
  const std::string synth = "synth --seed 3 --per-cell 2 --raters 800";
  REQUIRE(run(synth + " --out " + (dir / "a.csv").string() + " --manifest " + (dir / "a.json").string()) == 0);
  REQUIRE(run(synth + " --out " + (dir / "b.csv").string() + " --manifest " + (dir / "b.json").string()) == 0);
  CHECK(read(dir / "a.csv") == read(dir / "b.csv"));
  CHECK(read(dir / "a.json") == read(dir / "b.json"));

  const std::string fit = "fit --seed 5 --raters 2000 --input " + (dir / "a.csv").string() + " --out ";
  REQUIRE(run(fit + (dir / "f1.csv").string(), "DDD_THREADS=1") == 0);
  REQUIRE(run(fit + (dir / "f4.csv").string(), "DDD_THREADS=4") == 0);
  CHECK(read(dir / "f1.csv") == read(dir / "f4.csv"));
  CHECK(read(dir / "f1.csv").starts_with("id,m,n,rmse\n"));
}

TEST_CASE("skmap puts symmetric two-point histograms on the boundary") {
  const fs::path dir = cli::scratch("skmap");
  {
    std::ofstream in(dir / "two.csv");
    in << "a,0,0,0,5,0,5,0,0,0,0\nb,0,0,7,0,0,0,0,7,0,0\nc,9,0,0,0,0,0,0,0,0,9\nd,0,0,0,0,3,0,0,0,0,0\n";
  }
  REQUIRE(run("skmap --input " + (dir / "two.csv").string() + " --out " + (dir / "sk.csv").string() + " --boundary " +
              (dir / "b.csv").string()) == 0);
  std::istringstream rows(read(dir / "sk.csv"));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "id,skew,kurt,bucket");
  int points = 0;
  while (std::getline(rows, line)) {
    double s = 0, k = 0;
    std::sscanf(line.substr(line.find(',') + 1).c_str(), "%lf,%lf", &s, &k);
    CHECK(k == doctest::Approx(s * s + 1.0).epsilon(1e-6));
    ++points;
  }
  CHECK(points == 3);  // the point mass has no S-K point
  CHECK(read(dir / "b.csv").find("0.000000,1.000000") != std::string::npos);
}

TEST_CASE("compare-gaussian emits both tables") {
  const fs::path dir = cli::scratch("compare");
  REQUIRE(run("compare-gaussian --seed 1 --input " + (cli::kData / "synth" / "synth_490.csv").string() + " --table1 " +
              (dir / "t1.csv").string() + " --table2 " + (dir / "t2.csv").string()) == 0);
  CHECK(read(dir / "t1.csv").starts_with("method,1-2,2-3,3-4,4-5,5-6,6-7,7-8,8-9,all\nGaussian,"));
  CHECK(read(dir / "t2.csv").starts_with("method,mean_mse,std_mse,skew_mse,kurt_mse\n"));
}

TEST_CASE("eval closes the fit pipeline") {
  const fs::path dir = cli::scratch("eval");
  const std::string truth = (cli::kData / "synth" / "synth_490.csv").string();
  REQUIRE(run("fit --seed 1 --input " + truth + " --out " + (dir / "fits.csv").string()) == 0);
  REQUIRE(run("eval --seed 1 --pred-params " + (dir / "fits.csv").string() + " --truth " + truth + " --verbose --out " +
              (dir / "r.json").string()) == 0);
  const auto report = nlohmann::json::parse(read(dir / "r.json"));
  CHECK(report["count"] == 490);

  // The mean RMSE in the report equals the mean of the fit stage's per-image RMSE.
  std::istringstream fits(read(dir / "fits.csv"));
  std::string line;
  std::getline(fits, line);
  double sum = 0;
  int n = 0;
  while (std::getline(fits, line)) {
    sum += std::stod(line.substr(line.rfind(',') + 1));
    ++n;
  }
  CHECK(report["rmse"].get<double>() == doctest::Approx(sum / n).epsilon(1e-9));

  REQUIRE(run("eval --pred " + truth + " --truth " + truth + " --out " + (dir / "self.json").string()) == 0);
  const auto self = nlohmann::json::parse(read(dir / "self.json"));
  CHECK(self["class_acc"] == 1.0);
  CHECK(self["ped"] == 0.0);

  CHECK(run("eval --truth " + truth) == 2);
}

TEST_CASE("ava input with a split file") {
  const fs::path dir = cli::scratch("ava");
  REQUIRE(run("fit --seed 1 --raters 2000 --input " + (cli::kData / "ava_sample.txt").string() +
              " --input-format ava --out " + (dir / "f.csv").string()) == 0);
  const std::string out = read(dir / "f.csv");
  CHECK(std::count(out.begin(), out.end(), '\n') == 201);

  REQUIRE(run("fit --seed 1 --raters 2000 --bins 7 --input " + (cli::kData / "photonet_sample.csv").string() +
              " --input-format photonet --input-split " + (cli::kData / "photonet_split.csv").string() + " --out " +
              (dir / "p.csv").string()) == 0);
  const std::string pn = read(dir / "p.csv");
  CHECK(std::count(pn.begin(), pn.end(), '\n') == 21);
}
