// Monte Carlo driver: ergodic-rate estimation and parameter sweeps to CSV.
#pragma once

#include "relaysim/channel.hpp"
#include "relaysim/schemes.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaysim {

enum class SweepVariable { SigmaE2, QDb, GDb, IDb };

// CLI / CSV label: sigma_e2, q, g, i.
const char* toString(SweepVariable v);
std::optional<SweepVariable> sweepVariableFromString(const std::string& label);

// params with the swept field replaced by value.
SystemParams withSweepValue(SystemParams params, SweepVariable v, double value);

// Default grid for each sweep variable.
std::vector<double> defaultSweepValues(SweepVariable v);

inline constexpr int kDefaultTrials = 2000;

struct SweepConfig {
  SystemParams baseParams;
  SweepVariable sweepVariable = SweepVariable::SigmaE2;
  std::vector<double> sweepValues;
  int trials = kDefaultTrials;
  std::uint64_t masterSeed = 1;
  std::vector<Scheme> schemes{Scheme::Fdr, Scheme::Hdr, Scheme::Baseline};
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

struct ErgodicEstimate {
  double meanRate = 0.0;
  double stdError = 0.0;
  int trials = 0;        // trials contributing to the mean
  int failedTrials = 0;  // trials where no candidate could be evaluated
  long skippedCandidates = 0;
};

struct SweepRow {
  double sweepValue = 0.0;
  Scheme scheme{};
  double meanRate = 0.0;
  double stdError = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Per-scheme sum rates of one trial; the draw depends only on
// (params, masterSeed, trial).
std::vector<SchemeResult> evaluateTrial(const SystemParams& params, std::uint64_t masterSeed,
                                        std::uint64_t trial, std::span<const Scheme> schemes);

// Mean and standard error of several schemes over the same trials.
std::vector<ErgodicEstimate> estimateErgodic(const SystemParams& params, int trials,
                                             std::uint64_t masterSeed,
                                             std::span<const Scheme> schemes,
                                             unsigned workers = 0);

ErgodicEstimate estimateErgodic(const SystemParams& params, int trials, std::uint64_t masterSeed,
                                Scheme scheme, unsigned workers = 0);

// Sum by recursive halving, so the result does not depend on how trials were
// scheduled.
double pairwiseSum(std::span<const double> values);

inline constexpr const char* kCsvHeader = "sweep_var,sweep_value,scheme,mean_rate,std_error,trials,seed";

// Rows ordered by (sweep value, scheme label).
std::vector<SweepRow> runSweep(const SweepConfig& config);

void writeCsv(std::ostream& out, SweepVariable v, std::span<const SweepRow> rows);

// Runs the sweep and writes the CSV to path. On failure the partial file is
// removed and IoError is thrown.
std::vector<SweepRow> runSweep(const SweepConfig& config, const std::filesystem::path& path);

}  // namespace relaysim
