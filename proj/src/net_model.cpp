#include "rip/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rip {

namespace {

std::vector<double> segment_boundaries(const Net& net) {
  std::vector<double> b;
  b.reserve(net.segments.size() + 1);
  b.push_back(0.0);
  double acc = 0.0;
  for (const Segment& s : net.segments) {
    acc += s.length;
    b.push_back(acc);
  }
  return b;
}

}  // namespace

void normalize_zones(Net& net) {
  std::sort(net.zones.begin(), net.zones.end(),
            [](const ForbiddenZone& a, const ForbiddenZone& b) { return a.start < b.start; });
}

void validate_net(const Net& net) {
  if (net.segments.empty()) throw validation_error("net has no segments");
  for (std::size_t i = 0; i < net.segments.size(); ++i) {
    const Segment& s = net.segments[i];
    const std::string tag = "segment " + std::to_string(i + 1) + ": ";
    if (!(s.length > 0.0)) throw validation_error(tag + "length must be > 0");
    if (!(s.r > 0.0)) throw validation_error(tag + "resistance per unit length must be > 0");
    if (!(s.c > 0.0)) throw validation_error(tag + "capacitance per unit length must be > 0");
  }
  if (!(net.driver_width > 0.0)) throw validation_error("driver width must be > 0");
  if (!(net.receiver_width > 0.0)) throw validation_error("receiver width must be > 0");

  const double length = total_length(net);
  std::vector<ForbiddenZone> zones = net.zones;
  std::sort(zones.begin(), zones.end(),
            [](const ForbiddenZone& a, const ForbiddenZone& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const ForbiddenZone& z = zones[i];
    const std::string tag = "zone " + std::to_string(i + 1) + ": ";
    if (!(z.start < z.end)) throw validation_error(tag + "zone start >= end");
    if (z.start < 0.0) throw validation_error(tag + "zone start < 0");
    if (z.end > length) throw validation_error(tag + "zone end exceeds net length");
    if (i > 0 && zones[i - 1].end > z.start)
      throw validation_error("overlapping zones at " + std::to_string(z.start) + " um");
  }
}

double total_length(const Net& net) {
  double acc = 0.0;
  for (const Segment& s : net.segments) acc += s.length;
  return acc;
}

std::pair<double, double> rc_between(const Net& net, Position a, Position b) {
  if (a > b) throw validation_error("rc_between requires a <= b");
  double r = 0.0, c = 0.0;
  double seg_start = 0.0;
  for (const Segment& s : net.segments) {
    const double seg_end = seg_start + s.length;
    const double lo = std::max(a, seg_start);
    const double hi = std::min(b, seg_end);
    if (hi > lo) {
      r += s.r * (hi - lo);
      c += s.c * (hi - lo);
    }
    seg_start = seg_end;
    if (seg_start >= b) break;
  }
  return {r, c};
}

std::vector<WirePiece> pieces_between(const Net& net, Position a, Position b) {
  if (a > b) throw validation_error("pieces_between requires a <= b");
  std::vector<WirePiece> pieces;
  double seg_start = 0.0;
  for (const Segment& s : net.segments) {
    const double seg_end = seg_start + s.length;
    const double lo = std::max(a, seg_start);
    const double hi = std::min(b, seg_end);
    if (hi > lo) pieces.push_back({hi - lo, s.r, s.c});
    seg_start = seg_end;
    if (seg_start >= b) break;
  }
  return pieces;
}

std::pair<double, double> unit_rc_at(const Net& net, Position x, Side side) {
  const double length = total_length(net);
  if (x < 0.0 || x > length) throw validation_error("position outside the net");
  if (side == Side::left && x <= 0.0)
    throw validation_error("no wire on the left of the driver terminal");
  if (side == Side::right && x >= length)
    throw validation_error("no wire on the right of the receiver terminal");

  const std::vector<double> b = segment_boundaries(net);
  std::size_t idx;
  if (side == Side::right) {
    // segment k with b[k] <= x < b[k+1]
    idx = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), x) - b.begin()) - 1;
  } else {
    // segment k with b[k] < x <= b[k+1]
    idx = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), x) - b.begin()) - 1;
  }
  idx = std::min(idx, net.segments.size() - 1);
  const Segment& s = net.segments[idx];
  return {s.r, s.c};
}

bool in_forbidden(const Net& net, Position x) {
  for (const ForbiddenZone& z : net.zones)
    if (x > z.start && x < z.end) return true;
  return false;
}

std::vector<Position> candidate_grid(const Net& net, double step) {
  if (!(step > 0.0)) throw validation_error("grid step must be > 0");
  const double length = total_length(net);
  std::vector<Position> grid;
  for (std::size_t k = 1;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (!(x < length)) break;
    if (!in_forbidden(net, x)) grid.push_back(x);
  }
  return grid;
}

}  // namespace rip
