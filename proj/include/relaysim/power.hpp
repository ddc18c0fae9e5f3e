#pragma once

#include "relaysim/numerics.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace relaysim {

struct PowerAllocation {
  RVector streamPowers;  // per stream; the relay-bound stream is last when present
  RVector weights;       // BS power cost per unit stream power, 1/tau
  double waterLevel = 0.0;
  bool relayCapActive = false;
  bool residualClamped = false;  // relay cap alone exceeded the BS budget

  double bsPowerUsed() const { return weights.dot(streamPowers); }
};

class DegenerateRelayWeight : public std::runtime_error {
 public:
  explicit DegenerateRelayWeight(const std::string& what) : std::runtime_error(what) {}
};

// Maximizes sum log2(1 + P_k) subject to sum P_k / tau_k = pTotal.
// P_k = (mu tau_k - 1)^+, with the active set found by sorting 1/tau.
PowerAllocation waterFill(std::span<const double> tau, double pTotal);

// Joint water-fill of MS streams and one relay stream of BS cost relayWeight,
// then, when the relay stream would exceed relayCap, pin it to the cap and
// re-water-fill the MS streams on what is left of the budget.
PowerAllocation twoStageAllocate(std::span<const double> msTaus, double relayWeight,
                                 std::optional<double> relayCap, double pTotalBs);

// Largest forwarded-stream power the RS can radiate: ptRs / |w^RS|^2.
double relayCap(double ptRs, Complex wRsAtRelay);

}  // namespace relaysim
