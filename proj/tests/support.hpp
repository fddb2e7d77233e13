#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "rip/bench.hpp"
#include "rip/net_model.hpp"

namespace testsup {

using namespace rip;

// One uniform segment, no zones.
inline Net flat_net(double length, double r, double c, double w_d = 100.0, double w_r = 100.0) {
  Net net;
  net.segments.push_back({length, r, c});
  net.driver_width = w_d;
  net.receiver_width = w_r;
  return net;
}

// Two alternating layers with a zone in the middle; small enough for
// exhaustive checks.
inline Net two_layer_net() {
  Net net;
  net.segments.push_back({3000.0, 0.075, 2.0e-16});
  net.segments.push_back({2500.0, 0.045, 2.5e-16});
  net.segments.push_back({3500.0, 0.075, 2.0e-16});
  net.zones.push_back({4000.0, 5200.0});
  net.driver_width = 100.0;
  net.receiver_width = 100.0;
  return net;
}

inline Net random_net(std::mt19937_64& rng) { return gen_net(GenParams{}, default_tech(), rng); }

// Random legal placement: distinct interior positions at least 1 um apart and
// outside forbidden zones, with real-valued widths.
inline RepeaterSolution random_solution(const Net& net, std::mt19937_64& rng, int max_repeaters,
                                        double min_width = 20.0, double max_width = 400.0) {
  const double length = total_length(net);
  const auto count = uniform_int(rng, 0, static_cast<std::uint64_t>(max_repeaters));
  std::vector<double> xs;
  int attempts = 0;
  while (xs.size() < count && attempts < 1000) {
    ++attempts;
    const double x = uniform_real(rng, 1.0, length - 1.0);
    if (in_forbidden(net, x)) continue;
    bool close = false;
    for (double other : xs)
      if (std::abs(other - x) < 1.0) close = true;
    if (!close) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  RepeaterSolution sol;
  for (double x : xs) sol.repeaters.push_back({x, uniform_real(rng, min_width, max_width)});
  return sol;
}

}  // namespace testsup
