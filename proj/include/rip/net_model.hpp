#pragma once

#include <utility>
#include <vector>

#include "rip/errors.hpp"

namespace rip {

/// Distance along the net in micrometers, measured from the driver output
/// (x = 0) toward the receiver (x = total_length).
using Position = double;

/// Device constants of a unit-width repeater. A repeater of width w has
/// effective output resistance r_s / w, input capacitance c_o * w and output
/// (parasitic) capacitance c_p * w, so the intrinsic delay term r_s * c_p is
/// width independent.
struct TechParams {
  double r_s = 0.0;  ///< output resistance, ohm * unit-width
  double c_o = 0.0;  ///< input capacitance, farad / unit-width
  double c_p = 0.0;  ///< output parasitic capacitance, farad / unit-width
  double u = 1.0;    ///< minimal repeater width; discrete widths are multiples of u
};

/// One routed wire segment with uniform per-unit-length RC.
struct Segment {
  double length = 0.0;  ///< um
  double r = 0.0;       ///< ohm / um
  double c = 0.0;       ///< farad / um
};

/// Open interval (start, end) where no repeater may sit. Placement exactly
/// at an endpoint is legal.
struct ForbiddenZone {
  double start = 0.0;  ///< um
  double end = 0.0;    ///< um
};

/// Multi-layer two-pin net: ordered segments (driver side first), forbidden
/// zones and the driver/receiver gate widths.
struct Net {
  std::vector<Segment> segments;
  std::vector<ForbiddenZone> zones;
  double driver_width = 0.0;    ///< w_d, multiples of u
  double receiver_width = 0.0;  ///< w_r, multiples of u
};

/// One sub-piece of wire with uniform RC, used when a net is cut at repeater
/// positions.
struct WirePiece {
  double length = 0.0;  ///< um
  double r = 0.0;       ///< ohm / um
  double c = 0.0;       ///< farad / um
};

struct Repeater {
  Position x = 0.0;   ///< um from the driver
  double width = 0.0; ///< multiples of u, real-valued
};

/// An ordered repeater assignment plus its evaluated delay and the
/// total-width power proxy.
struct RepeaterSolution {
  std::vector<Repeater> repeaters;  ///< strictly increasing x
  double delay = 0.0;               ///< seconds, filled by evaluation
  double total_width = 0.0;         ///< sum of widths
};

enum class Side { left, right };

/// Sorts zones by start position. Readers and generators call this before
/// validation; overlapping zones are rejected there, not merged.
void normalize_zones(Net& net);

/// Checks every Net/Segment/ForbiddenZone invariant and throws
/// validation_error naming the first violation.
void validate_net(const Net& net);

/// Sum of segment lengths in um.
double total_length(const Net& net);

/// Lumped resistance and capacitance of the wire strictly between a and b.
/// Requires a <= b.
std::pair<double, double> rc_between(const Net& net, Position a, Position b);

/// The uniform sub-pieces of wire covering (a, b), driver side first.
std::vector<WirePiece> pieces_between(const Net& net, Position a, Position b);

/// Per-unit-length RC of the segment touching x on the given side. At a
/// segment boundary the two sides differ; side=left requires x > 0 and
/// side=right requires x < total_length.
std::pair<double, double> unit_rc_at(const Net& net, Position x, Side side);

/// True iff x lies strictly inside any forbidden zone.
bool in_forbidden(const Net& net, Position x);

/// Uniform candidate positions step, 2*step, ... strictly inside (0, L),
/// with forbidden positions removed. The terminals are never candidates.
std::vector<Position> candidate_grid(const Net& net, double step);

}  // namespace rip
