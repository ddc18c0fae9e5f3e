#include "relaysim/precoding.hpp"

#include <algorithm>
#include <cmath>

namespace relaysim {

const char* toString(Mode mode) {
  switch (mode) {
    case Mode::HdrPhase1: return "HdrPhase1";
    case Mode::HdrPhase2: return "HdrPhase2";
    case Mode::Fdr: return "Fdr";
    case Mode::Baseline: return "Baseline";
  }
  return "?";
}

int maxGammaSize(Mode mode, int antennas) {
  switch (mode) {
    case Mode::HdrPhase1:
    case Mode::Fdr: return antennas - 1;
    case Mode::HdrPhase2:
    case Mode::Baseline: return antennas;
  }
  return 0;
}

void validateSelection(Mode mode, const Channels& ch, const Selection& sel) {
  const int k = static_cast<int>(sel.gamma.size());
  if (k > maxGammaSize(mode, ch.antennas())) {
    throw InvalidSelection(std::string(toString(mode)) + ": |Gamma| = " + std::to_string(k) +
                           " exceeds " + std::to_string(maxGammaSize(mode, ch.antennas())));
  }
  if (mode == Mode::Baseline && k == 0) {
    throw InvalidSelection("Baseline: empty selection has no streams");
  }
  std::vector<int> sorted = sel.gamma;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidSelection("duplicate MS-1 index");
  }
  for (int g : sel.gamma) {
    if (g < 0 || g >= ch.ms1Count()) throw InvalidSelection("MS-1 index out of range");
  }
  const bool needsMs2 = mode == Mode::HdrPhase2 || mode == Mode::Fdr;
  if (needsMs2 && !sel.ms2) throw InvalidSelection("MS-2 index required");
  if (sel.ms2 && (*sel.ms2 < 0 || *sel.ms2 >= ch.ms2Count())) {
    throw InvalidSelection("MS-2 index out of range");
  }
}

CMatrix buildStackedChannel(Mode mode, const Channels& ch, const Selection& sel) {
  validateSelection(mode, ch, sel);
  const int l = ch.antennas();
  const int k = static_cast<int>(sel.gamma.size());

  switch (mode) {
    case Mode::Baseline:
    case Mode::HdrPhase1: {
      const int rows = mode == Mode::HdrPhase1 ? k + 1 : k;
      CMatrix h(rows, l);
      for (int m = 0; m < k; ++m) h.row(m) = ch.bsToMs1.row(sel.gamma[m]);
      if (mode == Mode::HdrPhase1) h.row(k) = ch.bsToRs.row(0);
      return h;
    }
    case Mode::HdrPhase2:
    case Mode::Fdr: {
      const int rows = mode == Mode::Fdr ? k + 2 : k + 1;
      CMatrix h = CMatrix::Zero(rows, l + 1);
      for (int m = 0; m < k; ++m) {
        h.row(m).head(l) = ch.bsToMs1.row(sel.gamma[m]);
        h(m, l) = ch.rsToMs1(sel.gamma[m]);
      }
      if (mode == Mode::Fdr) {
        h.row(k).head(l) = ch.bsToRs.row(0);
        h(k, l) = ch.rsToRs;
      }
      h(rows - 1, l) = ch.rsToMs2(*sel.ms2);
      return h;
    }
  }
  throw InvalidSelection("unknown mode");
}

std::optional<int> PrecoderSet::relayColumn() const {
  if (mode == Mode::HdrPhase1 || mode == Mode::Fdr) return msStreams();
  return std::nullopt;
}

std::optional<int> PrecoderSet::forwardColumn() const {
  if (mode == Mode::HdrPhase2) return msStreams();
  if (mode == Mode::Fdr) return msStreams() + 1;
  return std::nullopt;
}

double PrecoderSet::bsColumnWeight(int c) const {
  return weights.col(c).head(antennas).squaredNorm();
}

Complex PrecoderSet::rsWeight() const {
  if (!hasRelayRow()) throw std::logic_error("precoder has no relay row");
  return weights(antennas, *forwardColumn());
}

PrecoderSet computePrecoder(Mode mode, const CMatrix& stacked, const Selection& sel) {
  PrecoderSet pre;
  pre.mode = mode;
  pre.selection = sel;
  pre.stacked = stacked;
  pre.weights = rightPseudoInverse(stacked);
  pre.antennas = static_cast<int>(mode == Mode::HdrPhase2 || mode == Mode::Fdr
                                      ? stacked.cols() - 1
                                      : stacked.cols());

  if (pre.hasRelayRow()) {
    // The RS only knows the forwarded symbol, so its row is zero elsewhere.
    const int fwd = *pre.forwardColumn();
    for (int c = 0; c < pre.streamCount(); ++c) {
      if (c == fwd) continue;
      Complex& entry = pre.weights(pre.antennas, c);
      if (std::abs(entry) > kStructuralZeroTol) {
        throw SingularChannel("relay row structural zero violated in column " +
                              std::to_string(c));
      }
      entry = Complex(0.0, 0.0);
    }
  }
  return pre;
}

}  // namespace relaysim
