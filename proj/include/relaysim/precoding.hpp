// Stacked channels and ZF precoders for the four transmission configurations.
//
// User indices are 0-based throughout the library.
#pragma once

#include "relaysim/channel.hpp"
#include "relaysim/numerics.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaysim {

enum class Mode {
  HdrPhase1,  // BS -> {MS-1 subset, RS}; rows H(Gamma) over h^BS_RS
  HdrPhase2,  // BS+RS -> {MS-1 subset, one MS-2}
  Fdr,        // BS+RS -> {MS-1 subset, RS, one MS-2}
  Baseline,   // BS -> MS-1 subset, no relay
};

const char* toString(Mode mode);

struct Selection {
  std::vector<int> gamma;    // served MS-1 users, in stream order
  std::optional<int> ms2{};  // served MS-2 user

  bool operator==(const Selection&) const = default;
};

class InvalidSelection : public std::invalid_argument {
 public:
  explicit InvalidSelection(const std::string& what) : std::invalid_argument(what) {}
};

// Largest |Gamma| allowed in a mode for L antennas.
int maxGammaSize(Mode mode, int antennas);

// Throws InvalidSelection when sel does not fit mode or the channel sizes.
void validateSelection(Mode mode, const Channels& ch, const Selection& sel);

// Stacks the rows seen by the served receivers, in stream order.
//   HdrPhase1: (k+1) x L      [H(Gamma); h^BS_RS]
//   Baseline:  k x L          [H(Gamma)]
//   HdrPhase2: (k+1) x (L+1)  [H(Gamma) h(Gamma); 0 h^RS_2j]
//   Fdr:       (k+2) x (L+1)  [H(Gamma) h(Gamma); h^BS_RS h^RS_RS; 0 h^RS_2j]
CMatrix buildStackedChannel(Mode mode, const Channels& ch, const Selection& sel);

// Entries of the relay transmit row that must vanish are snapped to zero when
// below this bound.
inline constexpr double kStructuralZeroTol = 1e-10;

// A ZF precoder W = pinv(stacked) together with the meaning of its columns.
//
// Columns follow the stream order of the stacked rows: k MS-1 streams, then
// the RS-bound stream (HdrPhase1, Fdr), then the forwarded MS-2 stream
// (HdrPhase2, Fdr). Modes with a relay transmitter have one extra row, the
// RS weight, below the L BS antenna rows.
struct PrecoderSet {
  Mode mode{};
  Selection selection;
  CMatrix stacked;
  CMatrix weights;
  int antennas = 0;

  int msStreams() const { return static_cast<int>(selection.gamma.size()); }
  int streamCount() const { return static_cast<int>(weights.cols()); }
  bool hasRelayRow() const { return mode == Mode::HdrPhase2 || mode == Mode::Fdr; }

  // Column of the BS-to-RS stream, if any.
  std::optional<int> relayColumn() const;
  // Column of the RS-to-MS-2 stream, if any.
  std::optional<int> forwardColumn() const;

  // ||w^BS||^2 of column c, BS antenna rows only.
  double bsColumnWeight(int c) const;
  // w^RS_{2,j}; requires a relay row.
  Complex rsWeight() const;
};

// W = pinv(stacked) with structural zeros checked and snapped.
// Throws SingularChannel on a degenerate stacked matrix or when a structural
// zero fails to hold to kStructuralZeroTol.
PrecoderSet computePrecoder(Mode mode, const CMatrix& stacked, const Selection& sel);

}  // namespace relaysim
