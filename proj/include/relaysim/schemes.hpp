// Per-realization evaluation of the three downlink schemes.
//
// Every scheme follows the same pattern: the BS builds precoders and power
// allocations from its estimated channels, while SINRs (and therefore rates)
// are measured on the true channels through G = H_true * W_hat. With perfect
// CSI, G is the identity and every SINR equals its stream power.
#pragma once

#include "relaysim/channel.hpp"
#include "relaysim/power.hpp"
#include "relaysim/precoding.hpp"

#include <optional>
#include <string>

namespace relaysim {

enum class Scheme { Fdr, Hdr, Baseline };

const char* toString(Scheme scheme);
std::optional<Scheme> schemeFromString(const std::string& label);

class ShapeMismatch : public std::invalid_argument {
 public:
  explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Composite gains from every transmit stream (column) to every receiver (row).
struct EffectiveGains {
  CMatrix gains;
};

EffectiveGains effectiveGains(const CMatrix& trueStacked, const PrecoderSet& precoder);

// SINR_k = |G_kk|^2 P_k / (1 + sum_{l != k} |G_kl|^2 P_l), unit noise.
RVector sinrFromGains(const EffectiveGains& g, const RVector& columnPowers);

// Power radiated per precoder column. In FDR the BS-to-RS symbol and its
// forwarded copy share one power, so the relay stream power is repeated.
RVector columnPowers(Mode mode, const PowerAllocation& alloc);

struct HdrCombination {
  double timeShare = 0.0;
  double sumRate = 0.0;
};

// Time share t with (1 - t) R_RS = t R_2j and the resulting slot-average rate
// (1 - t) R_Gamma + t (R_GammaCheck + R_2j). A silent relay (R_RS + R_2j = 0)
// leaves the whole slot to phase 1.
HdrCombination hdrCombine(double rGamma, double rRs, double rGammaCheck, double r2j);

struct SchemeResult {
  Scheme scheme{};
  Selection selection;                // FDR: (Gamma, j); HDR: phase-1 Gamma; baseline: Gamma
  std::optional<Selection> phase2{};  // HDR only: (GammaCheck, j)
  double timeShare = 0.0;             // HDR only
  RVector streamPowers;               // allocated power per precoder column
  RVector streamSinrs;                // realized SINR per precoder column
  double sumRate = 0.0;
  int skippedCandidates = 0;          // singular or degenerate candidates
  bool failed = false;                // no candidate could be evaluated
};

SchemeResult evaluateFdr(const ChannelRealization& real, const EstimatedChannels& est,
                         const SystemParams& params);
SchemeResult evaluateHdr(const ChannelRealization& real, const EstimatedChannels& est,
                         const SystemParams& params);
SchemeResult evaluateBaseline(const ChannelRealization& real, const EstimatedChannels& est,
                              const SystemParams& params);

SchemeResult evaluate(Scheme scheme, const ChannelRealization& real,
                      const EstimatedChannels& est, const SystemParams& params);

// All subsets of {0..n-1} with size in [minSize, maxSize], lexicographic.
std::vector<std::vector<int>> subsetsUpTo(int n, int minSize, int maxSize);

}  // namespace relaysim
