#pragma once

#include "relaysim/numerics.hpp"

#include <cstdint>
#include <random>

namespace relaysim {

// Scenario constants. Powers are linear and normalized to unit noise
// variance; the *Db fields are variance offsets relative to the unit-variance
// BS-to-MS link.
struct SystemParams {
  int antennas = 2;      // L, BS transmit antennas
  int ms1Count = 4;      // N1, users reachable from BS and RS
  int ms2Count = 4;      // N2, users reachable only from the RS
  double ptBs = 100.0;   // P_T^BS
  double ptRs = 50.0;    // P_T^RS
  double qDb = 6.0;      // RS-to-MS variance
  double gDb = 20.0;     // BS-to-RS gain offset
  double iDb = 10.0;     // RS self-interference gain offset
  double sigmaE2 = 0.0;  // CSI feedback error variance

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

double dbToLinear(double db);

// One set of channel coefficients for every link of the downlink.
struct Channels {
  CMatrix bsToMs1;   // N1 x L, row j is h^BS_{1,j}
  CVector rsToMs1;   // N1, h^RS_{1,j}
  CVector rsToMs2;   // N2, h^RS_{2,j}
  CMatrix bsToRs;    // 1 x L, h^BS_RS
  Complex rsToRs{};  // h^RS_RS, self-interference

  int antennas() const { return static_cast<int>(bsToMs1.cols()); }
  int ms1Count() const { return static_cast<int>(bsToMs1.rows()); }
  int ms2Count() const { return static_cast<int>(rsToMs2.size()); }

  bool operator==(const Channels& other) const;
};

// True channels of one fading draw.
struct ChannelRealization : Channels {};

// The BS's view of a realization after CSI feedback.
struct EstimatedChannels : Channels {};

// What a random draw is used for. Every role gets its own generator so that
// changing one link's variance (or the error variance) leaves the underlying
// standard-normal draws of every other role untouched.
enum class DrawRole : std::uint32_t {
  BsToMs1 = 0,
  RsToMs1,
  RsToMs2,
  BsToRs,
  RsToRs,
  ErrorBsToMs1,
  ErrorRsToMs1,
  ErrorRsToMs2,
  ErrorBsToRs,
  ErrorRsToRs,
};

// Random substreams of one Monte Carlo trial.
//
// Splitting rule: the generator for (masterSeed, trial, role) is an
// std::mt19937_64 seeded through std::seed_seq with the five 32-bit words
// {seed_lo, seed_hi, trial_lo, trial_hi, role}. Results therefore depend only
// on those three keys, never on evaluation order or worker count.
class TrialStreams {
 public:
  TrialStreams(std::uint64_t masterSeed, std::uint64_t trial)
      : masterSeed_(masterSeed), trial_(trial) {}

  std::mt19937_64 stream(DrawRole role) const;

  std::uint64_t masterSeed() const { return masterSeed_; }
  std::uint64_t trial() const { return trial_; }

 private:
  std::uint64_t masterSeed_;
  std::uint64_t trial_;
};

// i.i.d. circularly-symmetric complex Gaussian fading with the link variances
// of SystemParams.
ChannelRealization drawRealization(const SystemParams& params, const TrialStreams& streams);

// Adds i.i.d. CN(0, sigmaE2) errors to every coefficient.
EstimatedChannels injectCsiErrors(const ChannelRealization& real, double sigmaE2,
                                  const TrialStreams& streams);

}  // namespace relaysim
