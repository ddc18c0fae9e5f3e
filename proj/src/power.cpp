#include "relaysim/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace relaysim {

PowerAllocation waterFill(std::span<const double> tau, double pTotal) {
  const auto n = static_cast<Eigen::Index>(tau.size());
  PowerAllocation out;
  out.streamPowers = RVector::Zero(n);
  out.weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(tau[k] > 0.0) || !std::isfinite(tau[k])) {
      throw std::invalid_argument("waterFill: tau must be positive and finite");
    }
    out.weights(k) = 1.0 / tau[k];
  }
  if (!(pTotal >= 0.0)) throw std::invalid_argument("waterFill: negative budget");
  if (n == 0 || pTotal == 0.0) return out;

  // Strongest streams (smallest floor 1/tau) first.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return out.weights(a) < out.weights(b); });

  double floorSum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) floorSum += out.weights(order[k]);

  // Drop the weakest stream until the water level clears every floor.
  Eigen::Index active = n;
  double mu = (pTotal + floorSum) / static_cast<double>(active);
  while (active > 1 && mu <= out.weights(order[active - 1])) {
    floorSum -= out.weights(order[active - 1]);
    --active;
    mu = (pTotal + floorSum) / static_cast<double>(active);
  }

  out.waterLevel = mu;
  for (Eigen::Index i = 0; i < active; ++i) {
    const auto k = order[i];
    out.streamPowers(k) = std::max(0.0, mu * tau[k] - 1.0);
  }
  return out;
}

PowerAllocation twoStageAllocate(std::span<const double> msTaus, double relayWeight,
                                 std::optional<double> relayCap, double pTotalBs) {
  if (!(relayWeight >= 0.0)) throw std::invalid_argument("relay weight must be >= 0");
  if (relayCap && !(*relayCap >= 0.0)) throw std::invalid_argument("relay cap must be >= 0");
  const auto relay = static_cast<Eigen::Index>(msTaus.size());

  if (relayWeight == 0.0) {
    // The relay stream costs the BS nothing (e.g. HDR phase 2 with no MS-1
    // users): only the RS power limits it.
    if (!relayCap) throw std::invalid_argument("a free relay stream needs a cap");
    const PowerAllocation ms = waterFill(msTaus, pTotalBs);
    PowerAllocation out;
    out.weights.resize(relay + 1);
    out.weights.head(relay) = ms.weights;
    out.weights(relay) = 0.0;
    out.streamPowers.resize(relay + 1);
    out.streamPowers.head(relay) = ms.streamPowers;
    out.streamPowers(relay) = *relayCap;
    out.waterLevel = ms.waterLevel;
    out.relayCapActive = true;
    return out;
  }

  std::vector<double> taus(msTaus.begin(), msTaus.end());
  taus.push_back(1.0 / relayWeight);
  PowerAllocation joint = waterFill(taus, pTotalBs);
  // Keep the exact weight rather than 1/(1/w).
  joint.weights(relay) = relayWeight;

  if (!relayCap || joint.streamPowers(relay) < *relayCap) return joint;

  PowerAllocation out;
  out.weights = joint.weights;
  out.streamPowers = RVector::Zero(relay + 1);

  double residual = pTotalBs - relayWeight * *relayCap;
  if (residual < 0.0) {
    // Only reachable through rounding: the joint relay power is itself
    // bounded by pTotalBs / relayWeight.
    out.streamPowers(relay) = pTotalBs / relayWeight;
    out.residualClamped = true;
    return out;
  }

  const PowerAllocation ms = waterFill(msTaus, residual);
  out.streamPowers.head(relay) = ms.streamPowers;
  out.streamPowers(relay) = *relayCap;
  out.waterLevel = ms.waterLevel;
  out.relayCapActive = true;
  return out;
}

double relayCap(double ptRs, Complex wRsAtRelay) {
  const double mag = std::abs(wRsAtRelay);
  if (!(mag > 1e-12)) throw DegenerateRelayWeight("RS beamforming weight is ~0");
  if (!(ptRs >= 0.0)) throw std::invalid_argument("P_T^RS must be >= 0");
  return ptRs / (mag * mag);
}

}  // namespace relaysim
