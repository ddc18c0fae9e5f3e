#include "relaysim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {

namespace {

// Fills every coefficient of m with CN(0, variance), real part first.
template <typename Derived>
void fillGaussian(Eigen::MatrixBase<Derived>& m, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(scale * re, scale * im);
    }
  }
}

Complex drawScalar(double variance, std::mt19937_64& rng) {
  CMatrix one(1, 1);
  fillGaussian(one, variance, rng);
  return one(0, 0);
}

}  // namespace

void SystemParams::validate() const {
  if (antennas < 2) throw std::invalid_argument("L must be >= 2");
  if (ms1Count < 1) throw std::invalid_argument("N1 must be >= 1");
  if (ms2Count < 1) throw std::invalid_argument("N2 must be >= 1");
  if (!(ptBs > 0.0)) throw std::invalid_argument("P_T^BS must be > 0");
  if (!(ptRs >= 0.0)) throw std::invalid_argument("P_T^RS must be >= 0");
  if (!(sigmaE2 >= 0.0)) throw std::invalid_argument("sigma_E^2 must be >= 0");
  if (!std::isfinite(qDb) || !std::isfinite(gDb) || !std::isfinite(iDb) ||
      !std::isfinite(ptBs) || !std::isfinite(ptRs) || !std::isfinite(sigmaE2)) {
    throw std::invalid_argument("parameters must be finite");
  }
}

double dbToLinear(double db) { return std::pow(10.0, db / 10.0); }

bool Channels::operator==(const Channels& other) const {
  return bsToMs1 == other.bsToMs1 && rsToMs1 == other.rsToMs1 && rsToMs2 == other.rsToMs2 &&
         bsToRs == other.bsToRs && rsToRs == other.rsToRs;
}

std::mt19937_64 TrialStreams::stream(DrawRole role) const {
  std::seed_seq seq{static_cast<std::uint32_t>(masterSeed_),
                    static_cast<std::uint32_t>(masterSeed_ >> 32),
                    static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32),
                    static_cast<std::uint32_t>(role)};
  return std::mt19937_64(seq);
}

ChannelRealization drawRealization(const SystemParams& params, const TrialStreams& streams) {
  params.validate();
  const int l = params.antennas;
  const double q = dbToLinear(params.qDb);

  ChannelRealization real;
  real.bsToMs1.resize(params.ms1Count, l);
  real.rsToMs1.resize(params.ms1Count);
  real.rsToMs2.resize(params.ms2Count);
  real.bsToRs.resize(1, l);

  auto rng = streams.stream(DrawRole::BsToMs1);
  fillGaussian(real.bsToMs1, 1.0, rng);
  rng = streams.stream(DrawRole::RsToMs1);
  fillGaussian(real.rsToMs1, q, rng);
  rng = streams.stream(DrawRole::RsToMs2);
  fillGaussian(real.rsToMs2, q, rng);
  rng = streams.stream(DrawRole::BsToRs);
  fillGaussian(real.bsToRs, dbToLinear(params.gDb), rng);
  rng = streams.stream(DrawRole::RsToRs);
  real.rsToRs = drawScalar(dbToLinear(params.iDb), rng);
  return real;
}

EstimatedChannels injectCsiErrors(const ChannelRealization& real, double sigmaE2,
                                  const TrialStreams& streams) {
  if (!(sigmaE2 >= 0.0)) throw std::invalid_argument("sigma_E^2 must be >= 0");

  EstimatedChannels est;
  static_cast<Channels&>(est) = real;
  if (sigmaE2 == 0.0) return est;

  CMatrix bsMs1Err(real.bsToMs1.rows(), real.bsToMs1.cols());
  CVector rsMs1Err(real.rsToMs1.size());
  CVector rsMs2Err(real.rsToMs2.size());
  CMatrix bsRsErr(1, real.bsToRs.cols());

  auto rng = streams.stream(DrawRole::ErrorBsToMs1);
  fillGaussian(bsMs1Err, sigmaE2, rng);
  rng = streams.stream(DrawRole::ErrorRsToMs1);
  fillGaussian(rsMs1Err, sigmaE2, rng);
  rng = streams.stream(DrawRole::ErrorRsToMs2);
  fillGaussian(rsMs2Err, sigmaE2, rng);
  rng = streams.stream(DrawRole::ErrorBsToRs);
  fillGaussian(bsRsErr, sigmaE2, rng);
  rng = streams.stream(DrawRole::ErrorRsToRs);

  est.bsToMs1 += bsMs1Err;
  est.rsToMs1 += rsMs1Err;
  est.rsToMs2 += rsMs2Err;
  est.bsToRs += bsRsErr;
  est.rsToRs += drawScalar(sigmaE2, rng);
  return est;
}

}  // namespace relaysim
