#include "relaysim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace relaysim {

namespace {

std::string formatFloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((last - first) / step));
  for (int i = 0; i <= n; ++i) out.push_back(first + step * i);
  return out;
}

}  // namespace

const char* toString(SweepVariable v) {
  switch (v) {
    case SweepVariable::SigmaE2: return "sigma_e2";
    case SweepVariable::QDb: return "q";
    case SweepVariable::GDb: return "g";
    case SweepVariable::IDb: return "i";
  }
  return "?";
}

std::optional<SweepVariable> sweepVariableFromString(const std::string& label) {
  if (label == "sigma_e2") return SweepVariable::SigmaE2;
  if (label == "q") return SweepVariable::QDb;
  if (label == "g") return SweepVariable::GDb;
  if (label == "i") return SweepVariable::IDb;
  return std::nullopt;
}

SystemParams withSweepValue(SystemParams params, SweepVariable v, double value) {
  switch (v) {
    case SweepVariable::SigmaE2: params.sigmaE2 = value; break;
    case SweepVariable::QDb: params.qDb = value; break;
    case SweepVariable::GDb: params.gDb = value; break;
    case SweepVariable::IDb: params.iDb = value; break;
  }
  return params;
}

std::vector<double> defaultSweepValues(SweepVariable v) {
  switch (v) {
    case SweepVariable::SigmaE2: {
      std::vector<double> out;
      for (double e : grid(-4.0, -1.0, 0.5)) out.push_back(std::pow(10.0, e));
      return out;
    }
    case SweepVariable::QDb: return grid(0.0, 12.0, 2.0);
    case SweepVariable::GDb: return grid(0.0, 24.0, 2.0);
    case SweepVariable::IDb: return grid(0.0, 30.0, 3.0);
  }
  return {};
}

void SweepConfig::validate() const {
  baseParams.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (sweepValues.empty()) throw std::invalid_argument("sweep values must be non-empty");
  if (schemes.empty()) throw std::invalid_argument("at least one scheme is required");
  for (double v : sweepValues) withSweepValue(baseParams, sweepVariable, v).validate();
}

std::vector<SchemeResult> evaluateTrial(const SystemParams& params, std::uint64_t masterSeed,
                                        std::uint64_t trial, std::span<const Scheme> schemes) {
  const TrialStreams streams(masterSeed, trial);
  const ChannelRealization real = drawRealization(params, streams);
  const EstimatedChannels est = injectCsiErrors(real, params.sigmaE2, streams);
  std::vector<SchemeResult> out;
  out.reserve(schemes.size());
  for (Scheme s : schemes) out.push_back(evaluate(s, real, est, params));
  return out;
}

double pairwiseSum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwiseSum(values.first(half)) + pairwiseSum(values.subspan(half));
}

std::vector<ErgodicEstimate> estimateErgodic(const SystemParams& params, int trials,
                                             std::uint64_t masterSeed,
                                             std::span<const Scheme> schemes, unsigned workers) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::size_t nSchemes = schemes.size();
  const auto nTrials = static_cast<std::size_t>(trials);

  // rates[s * nTrials + t]; NaN marks a failed evaluation.
  std::vector<double> rates(nSchemes * nTrials);
  std::vector<long> skipped(nSchemes * nTrials, 0);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, nTrials));

  auto work = [&](unsigned w) {
    for (std::size_t t = w; t < nTrials; t += workers) {
      const auto results = evaluateTrial(params, masterSeed, t, schemes);
      for (std::size_t s = 0; s < nSchemes; ++s) {
        rates[s * nTrials + t] = results[s].failed ? std::nan("") : results[s].sumRate;
        skipped[s * nTrials + t] = results[s].skippedCandidates;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  std::vector<ErgodicEstimate> out(nSchemes);
  for (std::size_t s = 0; s < nSchemes; ++s) {
    std::vector<double> ok;
    ok.reserve(nTrials);
    ErgodicEstimate& e = out[s];
    for (std::size_t t = 0; t < nTrials; ++t) {
      const double r = rates[s * nTrials + t];
      e.skippedCandidates += skipped[s * nTrials + t];
      if (std::isnan(r)) {
        ++e.failedTrials;
      } else {
        ok.push_back(r);
      }
    }
    e.trials = static_cast<int>(ok.size());
    if (ok.empty()) continue;
    const double n = static_cast<double>(ok.size());
    e.meanRate = pairwiseSum(ok) / n;
    if (ok.size() > 1) {
      for (double& r : ok) r = (r - e.meanRate) * (r - e.meanRate);
      const double variance = pairwiseSum(ok) / (n - 1.0);
      e.stdError = std::sqrt(variance / n);
    }
  }
  return out;
}

ErgodicEstimate estimateErgodic(const SystemParams& params, int trials, std::uint64_t masterSeed,
                                Scheme scheme, unsigned workers) {
  const Scheme one[] = {scheme};
  return estimateErgodic(params, trials, masterSeed, one, workers).front();
}

std::vector<SweepRow> runSweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepRow> rows;
  for (double value : config.sweepValues) {
    const SystemParams params = withSweepValue(config.baseParams, config.sweepVariable, value);
    const auto estimates =
        estimateErgodic(params, config.trials, config.masterSeed, config.schemes, config.workers);
    for (std::size_t s = 0; s < config.schemes.size(); ++s) {
      rows.push_back({value, config.schemes[s], estimates[s].meanRate, estimates[s].stdError,
                      estimates[s].trials, config.masterSeed});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.sweepValue != b.sweepValue) return a.sweepValue < b.sweepValue;
    return std::string(toString(a.scheme)) < std::string(toString(b.scheme));
  });
  return rows;
}

void writeCsv(std::ostream& out, SweepVariable v, std::span<const SweepRow> rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << toString(v) << ',' << formatFloat(r.sweepValue) << ',' << toString(r.scheme) << ','
        << formatFloat(r.meanRate) << ',' << formatFloat(r.stdError) << ',' << r.trials << ','
        << r.seed << '\n';
  }
}

std::vector<SweepRow> runSweep(const SweepConfig& config, const std::filesystem::path& path) {
  std::vector<SweepRow> rows = runSweep(config);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  writeCsv(file, config.sweepVariable, rows);
  file.flush();
  const bool ok = static_cast<bool>(file);
  file.close();
  if (!ok || file.fail()) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw IoError("failed writing " + path.string());
  }
  return rows;
}

}  // namespace relaysim
