#include "rip/delay_power.hpp"

#include <string>

namespace rip {

double stage_delay(const TechParams& tech, const StageSpec& stage) {
  if (!(stage.w_drive > 0.0)) throw validation_error("stage driver width must be > 0");
  if (stage.w_recv < 0.0) throw validation_error("stage receiver width must be >= 0");

  double wire_r = 0.0;
  double wire_c = 0.0;
  for (const WirePiece& p : stage.pieces) {
    wire_r += p.r * p.length;
    wire_c += p.c * p.length;
  }

  // Distributed self-delay: each piece's resistance times half its own cap
  // plus everything downstream of it.
  double self = 0.0;
  double downstream_c = 0.0;
  for (auto it = stage.pieces.rbegin(); it != stage.pieces.rend(); ++it) {
    const double pc = it->c * it->length;
    self += it->r * it->length * (0.5 * pc + downstream_c);
    downstream_c += pc;
  }

  const double recv_cap = tech.c_o * stage.w_recv;
  return tech.r_s * tech.c_p + (tech.r_s / stage.w_drive) * (wire_c + recv_cap) +
         wire_r * recv_cap + self;
}

double total_delay(const TechParams& tech, const Net& net, const RepeaterSolution& sol) {
  const double length = total_length(net);
  double prev_x = 0.0;
  for (std::size_t i = 0; i < sol.repeaters.size(); ++i) {
    const Repeater& rep = sol.repeaters[i];
    if (i > 0 && !(rep.x > prev_x)) throw validation_error("repeater positions not strictly increasing");
    if (!(rep.x > 0.0) || !(rep.x < length))
      throw validation_error("repeater at " + std::to_string(rep.x) + " um is outside the net interior");
    if (in_forbidden(net, rep.x))
      throw validation_error("repeater at " + std::to_string(rep.x) + " um is inside a forbidden zone");
    if (!(rep.width > 0.0)) throw validation_error("repeater width must be > 0");
    prev_x = rep.x;
  }

  const std::size_t n = sol.repeaters.size();
  double acc = 0.0;
  double from = 0.0;
  double w_drive = net.driver_width;
  for (std::size_t i = 0; i <= n; ++i) {
    const double to = (i == n) ? length : sol.repeaters[i].x;
    const double w_recv = (i == n) ? net.receiver_width : sol.repeaters[i].width;
    StageSpec stage{w_drive, w_recv, pieces_between(net, from, to)};
    acc += stage_delay(tech, stage);
    from = to;
    w_drive = w_recv;
  }
  return acc;
}

double power_proxy(const RepeaterSolution& sol) {
  double acc = 0.0;
  for (const Repeater& r : sol.repeaters) acc += r.width;
  return acc;
}

}  // namespace rip
