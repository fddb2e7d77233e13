#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rip/delay_power.hpp"
#include "rip/net_model.hpp"

namespace rip {

/// Discrete search space for the dynamic program: allowed repeater widths
/// and candidate positions (already forbidden-zone-free).
struct DPConfig {
  std::vector<double> widths;       ///< strictly increasing, all > 0
  std::vector<Position> candidates; ///< strictly increasing, inside (0, L)
};

/// Partial solution while sweeping from the receiver toward the driver:
/// the capacitance seen looking downstream, the Elmore delay accumulated
/// from the current point to the receiver, and the total width placed so
/// far. trace reconstructs the placements.
struct DPLabel {
  double c_load = 0.0;   ///< farad
  double d_down = 0.0;   ///< seconds
  double w_total = 0.0;  ///< width units
  std::int32_t count = 0;
  std::int32_t trace = -1;
};

/// Tuning knobs that do not change the search space. Disabling pruning is
/// only viable on tiny instances; max_live_labels == 0 means unlimited and
/// exceeding a nonzero cap throws resource_limit_error.
struct DPLimits {
  bool prune = true;
  std::size_t max_live_labels = 0;
};

/// Removes every label weakly dominated in (c_load, d_down, w_total) by
/// another and keeps exactly one of any exact duplicates (the one with the
/// smallest count). Never removes a label on the 3-D Pareto frontier.
std::vector<DPLabel> prune_dominated(std::vector<DPLabel> labels);

/// Minimum total repeater width subject to total delay <= tau_t, exact over
/// the discrete space. Ties broken by smaller delay, then fewer repeaters.
/// Returns nullopt when no assignment meets tau_t.
std::optional<RepeaterSolution> dp_min_power(const TechParams& tech, const Net& net,
                                             const DPConfig& cfg, double tau_t,
                                             const DPLimits& limits = {});

struct MinDelayResult {
  RepeaterSolution solution;
  double tau_min = 0.0;  ///< seconds
};

/// Minimum achievable delay over the same search space; ties broken by
/// smaller total width. The empty placement always exists, so this never
/// fails.
MinDelayResult dp_min_delay(const TechParams& tech, const Net& net, const DPConfig& cfg,
                            const DPLimits& limits = {});

/// Builds the width list {min_u, min_u+step_u, ...} * u capped at max_u * u.
std::vector<double> width_range(double min_u, double max_u, double step_u, double u = 1.0);

/// Builds a library of `size` widths {min_u, min_u+gran_u, ...} * u.
std::vector<double> width_library(int size, double gran_u, double min_u, double u = 1.0);

}  // namespace rip
