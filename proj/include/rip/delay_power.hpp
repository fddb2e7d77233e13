#pragma once

#include <vector>

#include "rip/net_model.hpp"

namespace rip {

/// One buffered stage: a driving gate of width w_drive, a chain of wire
/// pieces and a receiving gate of width w_recv modeled as a capacitor.
/// w_recv == 0 models a capacitance-free probe and is allowed only here.
struct StageSpec {
  double w_drive = 0.0;
  double w_recv = 0.0;
  std::vector<WirePiece> pieces;  ///< driver side first
};

/// Elmore delay of a single stage: the intrinsic term r_s*c_p, the gate
/// drive through the lumped wire and receiver load, the wire resistance
/// charging the receiver, and the distributed wire self-delay with each
/// piece lumped as a pi section (half own cap plus all downstream cap).
double stage_delay(const TechParams& tech, const StageSpec& stage);

/// Elmore delay of the whole net cut at the solution's repeater positions,
/// with the driver and receiver acting as stage 0's driver and stage n's
/// receiver. Throws on unordered positions, positions at the terminals or
/// inside a forbidden zone, and non-positive widths.
double total_delay(const TechParams& tech, const Net& net, const RepeaterSolution& sol);

/// Total repeater width, the power proxy. Zero for the empty solution.
double power_proxy(const RepeaterSolution& sol);

}  // namespace rip
