#include "relaysim/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace relaysim;

namespace {

SystemParams small() {
  SystemParams p;
  p.sigmaE2 = 0.01;
  return p;
}

}  // namespace

TEST_CASE("a single trial has zero standard error") {
  const SystemParams p = small();
  const ErgodicEstimate e = estimateErgodic(p, 1, 7, Scheme::Fdr);
  const auto direct = evaluateTrial(p, 7, 0, std::vector<Scheme>{Scheme::Fdr});
  CHECK(e.stdError == 0.0);
  CHECK(e.trials == 1);
  CHECK(e.meanRate == direct[0].sumRate);
}

TEST_CASE("estimates are bit-identical across runs and worker counts") {
  const SystemParams p = small();
  const std::vector<Scheme> all{Scheme::Fdr, Scheme::Hdr, Scheme::Baseline};
  const auto a = estimateErgodic(p, 40, 11, all, 1);
  const auto b = estimateErgodic(p, 40, 11, all, 1);
  const auto c = estimateErgodic(p, 40, 11, all, 3);
  for (std::size_t s = 0; s < all.size(); ++s) {
    CHECK(a[s].meanRate == b[s].meanRate);
    CHECK(a[s].meanRate == c[s].meanRate);
    CHECK(a[s].stdError == c[s].stdError);
  }
  CHECK(estimateErgodic(p, 40, 12, Scheme::Fdr).meanRate != a[0].meanRate);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long double exact = 0.0L;
  for (double& x : v) {
    x = u(rng);
    exact += x;
  }
  CHECK(std::abs(pairwiseSum(v) - static_cast<double>(exact)) <= 1e-12);
  CHECK(pairwiseSum({}) == 0.0);
}

TEST_CASE("baseline single user ergodic mean agrees with direct sampling") {
  // With N1 = 1 and perfect CSI the baseline rate is log2(1 + 100 ||h||^2),
  // ||h||^2 a sum of L = 2 unit-variance complex Gaussians (chi^2_4 / 2).
  SystemParams p;
  p.ms1Count = 1;
  p.ms2Count = 1;
  p.sigmaE2 = 0.0;
  const int trials = 10000;
  const ErgodicEstimate e = estimateErgodic(p, trials, 2718, Scheme::Baseline);

  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    double g = 0.0;
    for (int k = 0; k < 4; ++k) g += 0.5 * std::pow(n(rng), 2);
    const double r = std::log2(1.0 + 100.0 * g);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / (trials - 1));
  CHECK(std::abs(e.meanRate - mean) <= 3.0 * std::sqrt(e.stdError * e.stdError + se * se));
}

TEST_CASE("standard error shrinks like 1/sqrt(trials)") {
  const SystemParams p = small();
  const double se2 = estimateErgodic(p, 100, 5, Scheme::Baseline).stdError;
  const double se3 = estimateErgodic(p, 1000, 5, Scheme::Baseline).stdError;
  const double se4 = estimateErgodic(p, 10000, 5, Scheme::Baseline).stdError;
  const double ratio = std::sqrt(10.0);
  CHECK(std::abs(se2 / se3 - ratio) <= 0.3 * ratio);
  CHECK(std::abs(se3 / se4 - ratio) <= 0.3 * ratio);
}

TEST_CASE("CSV layout and row order") {
  SweepConfig cfg;
  cfg.baseParams = small();
  cfg.sweepVariable = SweepVariable::IDb;
  cfg.sweepValues = {20.0, 10.0};
  cfg.trials = 3;
  cfg.masterSeed = 5;
  const auto rows = runSweep(cfg);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].sweepValue == 10.0);
  CHECK(toString(rows[0].scheme) == std::string("baseline"));
  CHECK(toString(rows[1].scheme) == std::string("fdr"));
  CHECK(toString(rows[2].scheme) == std::string("hdr"));
  CHECK(rows[3].sweepValue == 20.0);

  std::ostringstream out;
  writeCsv(out, cfg.sweepVariable, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "sweep_var,sweep_value,scheme,mean_rate,std_error,trials,seed");
  std::getline(in, line);
  CHECK(line.rfind("i,10,baseline,", 0) == 0);
  CHECK(line.substr(line.size() - 4) == ",3,5");
  CHECK(out.str().find('\r') == std::string::npos);

  // HDR never looks at the self-interference channel.
  CHECK(rows[2].meanRate == rows[5].meanRate);
  CHECK(rows[1].meanRate != rows[4].meanRate);
}

TEST_CASE("single value, single scheme, one trial gives one data row") {
  SweepConfig cfg;
  cfg.baseParams = small();
  cfg.sweepValues = {0.001};
  cfg.trials = 1;
  cfg.schemes = {Scheme::Hdr};
  const auto path = std::filesystem::temp_directory_path() / "relaysim_one_row.csv";
  runSweep(cfg, path);
  std::ifstream in(path);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 2);
  std::filesystem::remove(path);
}

TEST_CASE("sweep output is a pure function of the configuration") {
  SweepConfig cfg;
  cfg.baseParams = small();
  cfg.sweepVariable = SweepVariable::QDb;
  cfg.sweepValues = {0.0, 6.0};
  cfg.trials = 5;
  std::ostringstream a, b;
  writeCsv(a, cfg.sweepVariable, runSweep(cfg));
  writeCsv(b, cfg.sweepVariable, runSweep(cfg));
  CHECK(a.str() == b.str());
}

TEST_CASE("unwritable output raises IoError and leaves no file") {
  SweepConfig cfg;
  cfg.baseParams = small();
  cfg.sweepValues = {0.01};
  cfg.trials = 1;
  const std::filesystem::path bad = "/nonexistent-dir/out.csv";
  CHECK_THROWS_AS(runSweep(cfg, bad), IoError);
  CHECK_FALSE(std::filesystem::exists(bad));
}

TEST_CASE("invalid configurations are rejected") {
  SweepConfig cfg;
  cfg.sweepValues = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweepValues = {0.1};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.trials = 1;
  cfg.sweepValues = {-0.1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("default grids") {
  const auto s = defaultSweepValues(SweepVariable::SigmaE2);
  REQUIRE(s.size() == 7);
  CHECK(s.front() == doctest::Approx(1e-4));
  CHECK(s.back() == doctest::Approx(1e-1));
  CHECK(defaultSweepValues(SweepVariable::QDb).size() == 7);
  CHECK(defaultSweepValues(SweepVariable::GDb).back() == 24.0);
  CHECK(defaultSweepValues(SweepVariable::IDb).size() == 11);
  for (auto v : {SweepVariable::SigmaE2, SweepVariable::QDb, SweepVariable::GDb, SweepVariable::IDb})
    CHECK(sweepVariableFromString(toString(v)) == v);
}
