#include "relaysim/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace relaysim {

namespace {

double log2p1(double x) { return std::log2(1.0 + x); }

std::vector<double> msTaus(const PrecoderSet& pre) {
  std::vector<double> taus(pre.msStreams());
  for (int m = 0; m < pre.msStreams(); ++m) taus[m] = 1.0 / pre.bsColumnWeight(m);
  return taus;
}

// Outcome of one candidate selection, before any cross-candidate max.
struct Candidate {
  Selection selection;
  RVector powers;
  RVector sinrs;
  double msRate = 0.0;     // sum over MS-1 streams
  double relayRate = 0.0;  // RS-bound or forwarded stream, scheme dependent
};

struct Realized {
  RVector powers;
  RVector sinrs;
};

Realized realize(const Channels& real, const PrecoderSet& pre, const PowerAllocation& alloc) {
  const CMatrix trueStacked = buildStackedChannel(pre.mode, real, pre.selection);
  Realized r;
  r.powers = columnPowers(pre.mode, alloc);
  r.sinrs = sinrFromGains(effectiveGains(trueStacked, pre), r.powers);
  return r;
}

double msRateOf(const RVector& sinrs, int msStreams) {
  double rate = 0.0;
  for (int m = 0; m < msStreams; ++m) rate += log2p1(sinrs(m));
  return rate;
}

// BS-only water-fill over every column (baseline and HDR phase 1).
Candidate bsOnlyCandidate(Mode mode, const ChannelRealization& real, const EstimatedChannels& est,
                          const Selection& sel, double ptBs) {
  const PrecoderSet pre = computePrecoder(mode, buildStackedChannel(mode, est, sel), sel);
  const RVector norms = columnSquaredNorms(pre.weights);
  std::vector<double> taus(norms.size());
  for (Eigen::Index c = 0; c < norms.size(); ++c) taus[c] = 1.0 / norms(c);
  const PowerAllocation alloc = waterFill(taus, ptBs);

  Candidate cand;
  cand.selection = sel;
  auto [powers, sinrs] = realize(real, pre, alloc);
  cand.powers = std::move(powers);
  cand.sinrs = std::move(sinrs);
  cand.msRate = msRateOf(cand.sinrs, pre.msStreams());
  if (mode == Mode::HdrPhase1) cand.relayRate = log2p1(cand.sinrs(pre.msStreams()));
  return cand;
}

// Relay-capped allocation shared by FDR and HDR phase 2.
Candidate relayedCandidate(Mode mode, const ChannelRealization& real,
                           const EstimatedChannels& est, const Selection& sel,
                           const SystemParams& params) {
  const PrecoderSet pre = computePrecoder(mode, buildStackedChannel(mode, est, sel), sel);
  const int k = pre.msStreams();
  double relayWeight = pre.bsColumnWeight(*pre.forwardColumn());
  if (mode == Mode::Fdr) relayWeight += pre.bsColumnWeight(*pre.relayColumn());
  const double cap = relayCap(params.ptRs, pre.rsWeight());
  const std::vector<double> taus = msTaus(pre);
  const PowerAllocation alloc = twoStageAllocate(taus, relayWeight, cap, params.ptBs);

  Candidate cand;
  cand.selection = sel;
  auto [powers, sinrs] = realize(real, pre, alloc);
  cand.powers = std::move(powers);
  cand.sinrs = std::move(sinrs);
  cand.msRate = msRateOf(cand.sinrs, k);
  if (mode == Mode::Fdr) {
    // Decode-and-forward: the relayed stream is limited by the weaker hop.
    cand.relayRate = std::min(log2p1(cand.sinrs(k)), log2p1(cand.sinrs(k + 1)));
  } else {
    cand.relayRate = log2p1(cand.sinrs(k));
  }
  return cand;
}

template <typename Fn>
std::optional<Candidate> tryCandidate(Fn&& fn, int& skipped) {
  try {
    return fn();
  } catch (const SingularChannel&) {
  } catch (const DegenerateRelayWeight&) {
  }
  ++skipped;
  return std::nullopt;
}

}  // namespace

const char* toString(Scheme scheme) {
  switch (scheme) {
    case Scheme::Fdr: return "fdr";
    case Scheme::Hdr: return "hdr";
    case Scheme::Baseline: return "baseline";
  }
  return "?";
}

std::optional<Scheme> schemeFromString(const std::string& label) {
  if (label == "fdr") return Scheme::Fdr;
  if (label == "hdr") return Scheme::Hdr;
  if (label == "baseline") return Scheme::Baseline;
  return std::nullopt;
}

EffectiveGains effectiveGains(const CMatrix& trueStacked, const PrecoderSet& precoder) {
  if (trueStacked.cols() != precoder.weights.rows() ||
      trueStacked.rows() != precoder.weights.cols()) {
    throw ShapeMismatch("true stacked channel is " + std::to_string(trueStacked.rows()) + "x" +
                        std::to_string(trueStacked.cols()) + ", precoder is " +
                        std::to_string(precoder.weights.rows()) + "x" +
                        std::to_string(precoder.weights.cols()));
  }
  return {trueStacked * precoder.weights};
}

RVector sinrFromGains(const EffectiveGains& g, const RVector& columnPowers) {
  if (g.gains.cols() != columnPowers.size()) {
    throw ShapeMismatch("gain columns do not match stream count");
  }
  const Eigen::MatrixXd received = g.gains.cwiseAbs2() * columnPowers.asDiagonal();
  const RVector total = received.rowwise().sum();
  RVector sinr(g.gains.rows());
  for (Eigen::Index k = 0; k < sinr.size(); ++k) {
    const double signal = k < received.cols() ? received(k, k) : 0.0;
    sinr(k) = signal / (1.0 + (total(k) - signal));
  }
  return sinr;
}

RVector columnPowers(Mode mode, const PowerAllocation& alloc) {
  if (mode != Mode::Fdr) return alloc.streamPowers;
  const auto n = alloc.streamPowers.size();
  RVector out(n + 1);
  out.head(n) = alloc.streamPowers;
  out(n) = alloc.streamPowers(n - 1);
  return out;
}

HdrCombination hdrCombine(double rGamma, double rRs, double rGammaCheck, double r2j) {
  const double denom = r2j + rRs;
  if (!(denom > 0.0)) return {0.0, rGamma};
  return {rRs / denom, (rGamma * r2j + rRs * (rGammaCheck + r2j)) / denom};
}

std::vector<std::vector<int>> subsetsUpTo(int n, int minSize, int maxSize) {
  std::vector<std::vector<int>> out;
  const unsigned total = 1u << n;
  for (unsigned mask = 0; mask < total; ++mask) {
    const int size = std::popcount(mask);
    if (size < minSize || size > maxSize) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SchemeResult evaluateFdr(const ChannelRealization& real, const EstimatedChannels& est,
                         const SystemParams& params) {
  SchemeResult res;
  res.scheme = Scheme::Fdr;
  res.failed = true;

  std::optional<Candidate> best;
  for (const auto& gamma : subsetsUpTo(params.ms1Count, 0, params.antennas - 1)) {
    for (int j = 0; j < params.ms2Count; ++j) {
      auto cand = tryCandidate(
          [&] { return relayedCandidate(Mode::Fdr, real, est, {gamma, j}, params); },
          res.skippedCandidates);
      if (!cand) continue;
      if (!best || cand->msRate + cand->relayRate > best->msRate + best->relayRate) {
        best = std::move(cand);
      }
    }
  }
  if (!best) return res;

  res.failed = false;
  res.selection = best->selection;
  res.streamPowers = best->powers;
  res.streamSinrs = best->sinrs;
  res.sumRate = best->msRate + best->relayRate;
  return res;
}

SchemeResult evaluateHdr(const ChannelRealization& real, const EstimatedChannels& est,
                         const SystemParams& params) {
  SchemeResult res;
  res.scheme = Scheme::Hdr;
  res.failed = true;

  std::vector<Candidate> phase1;
  for (const auto& gamma : subsetsUpTo(params.ms1Count, 0, params.antennas - 1)) {
    auto cand = tryCandidate(
        [&] { return bsOnlyCandidate(Mode::HdrPhase1, real, est, {gamma, {}}, params.ptBs); },
        res.skippedCandidates);
    if (cand) phase1.push_back(std::move(*cand));
  }
  std::vector<Candidate> phase2;
  for (const auto& gamma : subsetsUpTo(params.ms1Count, 0, params.antennas)) {
    for (int j = 0; j < params.ms2Count; ++j) {
      auto cand = tryCandidate(
          [&] { return relayedCandidate(Mode::HdrPhase2, real, est, {gamma, j}, params); },
          res.skippedCandidates);
      if (cand) phase2.push_back(std::move(*cand));
    }
  }
  if (phase1.empty()) return res;

  const Candidate* best1 = nullptr;
  const Candidate* best2 = nullptr;
  HdrCombination bestMix;
  for (const auto& c1 : phase1) {
    if (phase2.empty()) {
      // No usable phase-2 candidate: the relay stays silent.
      const HdrCombination mix = hdrCombine(c1.msRate, c1.relayRate, 0.0, 0.0);
      if (!best1 || mix.sumRate > bestMix.sumRate) {
        best1 = &c1;
        bestMix = mix;
      }
    }
    for (const auto& c2 : phase2) {
      const HdrCombination mix = hdrCombine(c1.msRate, c1.relayRate, c2.msRate, c2.relayRate);
      if (!best1 || mix.sumRate > bestMix.sumRate) {
        best1 = &c1;
        best2 = &c2;
        bestMix = mix;
      }
    }
  }

  res.failed = false;
  res.selection = best1->selection;
  res.timeShare = bestMix.timeShare;
  res.sumRate = bestMix.sumRate;
  res.streamPowers = best1->powers;
  res.streamSinrs = best1->sinrs;
  if (best2) {
    res.phase2 = best2->selection;
    const auto n1 = best1->powers.size();
    const auto n2 = best2->powers.size();
    res.streamPowers.conservativeResize(n1 + n2);
    res.streamPowers.tail(n2) = best2->powers;
    res.streamSinrs.conservativeResize(n1 + n2);
    res.streamSinrs.tail(n2) = best2->sinrs;
  }
  return res;
}

SchemeResult evaluateBaseline(const ChannelRealization& real, const EstimatedChannels& est,
                              const SystemParams& params) {
  SchemeResult res;
  res.scheme = Scheme::Baseline;
  res.failed = true;

  std::optional<Candidate> best;
  for (const auto& gamma : subsetsUpTo(params.ms1Count, 1, params.antennas)) {
    auto cand = tryCandidate(
        [&] { return bsOnlyCandidate(Mode::Baseline, real, est, {gamma, {}}, params.ptBs); },
        res.skippedCandidates);
    if (!cand) continue;
    if (!best || cand->msRate > best->msRate) best = std::move(cand);
  }
  if (!best) return res;

  res.failed = false;
  res.selection = best->selection;
  res.streamPowers = best->powers;
  res.streamSinrs = best->sinrs;
  res.sumRate = best->msRate;
  return res;
}

SchemeResult evaluate(Scheme scheme, const ChannelRealization& real, const EstimatedChannels& est,
                      const SystemParams& params) {
  switch (scheme) {
    case Scheme::Fdr: return evaluateFdr(real, est, params);
    case Scheme::Hdr: return evaluateHdr(real, est, params);
    case Scheme::Baseline: return evaluateBaseline(real, est, params);
  }
  throw std::invalid_argument("unknown scheme");
}

}  // namespace relaysim
