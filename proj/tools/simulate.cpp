// simulate: ergodic sum-rate sweeps for the FDR / HDR / no-relay ZF downlink.
#include "relaysim/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace relaysim;

namespace {

std::vector<std::string> splitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo ergodic sum rate of relay-assisted ZF downlinks"};

  SweepConfig config;
  SystemParams& p = config.baseParams;
  p.sigmaE2 = 0.01;
  std::string sweep = "sigma_e2";
  std::string values;
  std::string schemes = "fdr,hdr,baseline";
  std::string out;

  app.add_option("--sweep", sweep, "Swept variable: sigma_e2, q, g or i")
      ->check(CLI::IsMember({"sigma_e2", "q", "g", "i"}));
  app.add_option("--values", values, "Comma-separated sweep values (default grid if omitted)");
  app.add_option("--trials", config.trials, "Channel realizations per point")
      ->default_val(kDefaultTrials);
  app.add_option("--seed", config.masterSeed, "Master seed")->default_val(1);
  app.add_option("--schemes", schemes, "Comma-separated subset of fdr,hdr,baseline")
      ->default_str(schemes);
  app.add_option("--l", p.antennas, "BS antennas")->default_val(2);
  app.add_option("--n1", p.ms1Count, "MS-1 group size")->default_val(4);
  app.add_option("--n2", p.ms2Count, "MS-2 group size")->default_val(4);
  app.add_option("--pt-bs", p.ptBs, "Total BS power (linear)")->default_val(100.0);
  app.add_option("--pt-rs", p.ptRs, "Total RS power (linear)")->default_val(50.0);
  app.add_option("--q-db", p.qDb, "RS-to-MS variance (dB)")->default_val(6.0);
  app.add_option("--g-db", p.gDb, "BS-to-RS gain offset (dB)")->default_val(20.0);
  app.add_option("--i-db", p.iDb, "RS self-interference gain offset (dB)")->default_val(10.0);
  app.add_option("--sigma-e2", p.sigmaE2, "CSI error variance")->default_val(0.01);
  app.add_option("--threads", config.workers, "Worker threads (0: all cores)")->default_val(0);
  app.add_option("--out", out, "Output CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    config.sweepVariable = *sweepVariableFromString(sweep);
    if (values.empty()) {
      config.sweepValues = defaultSweepValues(config.sweepVariable);
    } else {
      for (const auto& v : splitCommas(values)) {
        std::size_t used = 0;
        config.sweepValues.push_back(std::stod(v, &used));
        if (used != v.size()) throw std::invalid_argument("bad sweep value '" + v + "'");
      }
    }
    config.schemes.clear();
    for (const auto& s : splitCommas(schemes)) {
      const auto scheme = schemeFromString(s);
      if (!scheme) throw std::invalid_argument("unknown scheme '" + s + "'");
      config.schemes.push_back(*scheme);
    }
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "simulate: invalid configuration: " << e.what() << '\n';
    return 2;
  }

  try {
    runSweep(config, out);
  } catch (const IoError& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
