#pragma once

#include <numeric>
#include <vector>

#include "rip/delay_power.hpp"
#include "rip/net_model.hpp"

// Independent Elmore reference: build each stage as an explicit RC ladder of
// sliced wire elements (every slice a half-cap/series-R/half-cap section) and
// accumulate sum_k R_k * C_downstream(k) directly. No lumped closed form is
// used, so this cross-checks the production stage arithmetic.
namespace oracle {

inline double ladder_stage_delay(const rip::TechParams& tech, double w_drive, double w_recv,
                                 const std::vector<rip::WirePiece>& pieces,
                                 int slices_per_piece = 7) {
  std::vector<double> resistances;
  std::vector<double> node_caps;  // node_caps[k] sits just after resistances[k]
  resistances.push_back(tech.r_s / w_drive);
  // repeater output parasitic at the drive node, scaled by the drive width so
  // (r_s / w) * (c_p * w) reproduces the width-independent intrinsic term
  node_caps.push_back(tech.c_p * w_drive);
  for (const rip::WirePiece& piece : pieces) {
    for (int s = 0; s < slices_per_piece; ++s) {
      const double h = piece.length / slices_per_piece;
      node_caps.back() += piece.c * h / 2.0;
      resistances.push_back(piece.r * h);
      node_caps.push_back(piece.c * h / 2.0);
    }
  }
  node_caps.back() += tech.c_o * w_recv;

  double downstream = std::accumulate(node_caps.begin(), node_caps.end(), 0.0);
  double delay = 0.0;
  for (std::size_t k = 0; k < resistances.size(); ++k) {
    delay += resistances[k] * downstream;
    downstream -= node_caps[k];
  }
  return delay;
}

inline double ladder_total_delay(const rip::TechParams& tech, const rip::Net& net,
                                 const rip::RepeaterSolution& sol, int slices_per_piece = 7) {
  const double length = rip::total_length(net);
  double delay = 0.0;
  double from = 0.0;
  for (std::size_t i = 0; i <= sol.repeaters.size(); ++i) {
    const double to = (i == sol.repeaters.size()) ? length : sol.repeaters[i].x;
    const double w_drive = (i == 0) ? net.driver_width : sol.repeaters[i - 1].width;
    const double w_recv = (i == sol.repeaters.size()) ? net.receiver_width : sol.repeaters[i].width;
    delay += ladder_stage_delay(tech, w_drive, w_recv, rip::pieces_between(net, from, to),
                                slices_per_piece);
    from = to;
  }
  return delay;
}

}  // namespace oracle
