#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rip/analytic.hpp"
#include "rip/dp_engine.hpp"
#include "rip/net_model.hpp"

namespace rip {

// Tuning knobs for the hybrid pipeline: a coarse DP pass, an analytic
// width/location refinement, and a fine DP pass over a solution-local
// synthesized search space.
struct RipParams {
  std::vector<double> coarse_widths_u = {20.0, 40.0, 80.0, 160.0, 240.0, 320.0, 400.0};
  double coarse_loc_step = 200.0;  // um
  double round_quantum_u = 10.0;   // width rounding grid, in multiples of tech.u
  int width_neighbors = 2;         // quantum steps added on each side of a rounded width
  int neighbor_count = 10;         // locations added on each side of a seed repeater
  double neighbor_step = 50.0;     // um between synthesized neighbor locations
  RefineParams refine;
  DPLimits limits;
};

struct StageRecord {
  std::string stage;
  bool feasible = false;
  double delay = 0.0;        // seconds; 0 when the stage produced nothing
  double total_width = 0.0;  // sum of repeater widths
  double runtime_s = 0.0;
  std::string note;
};

struct RipOutcome {
  bool feasible = false;
  RepeaterSolution solution;  // meaningful only when feasible
  std::vector<StageRecord> stages;
  bool lambda_degenerate = false;
  int refine_iterations = 0;
};

// Builds the fine-stage DP search space around a seed solution: widths are
// rounded to the quantum (and floored at one quantum) with width_neighbors
// extra quantum steps on each side, locations get neighbor_count extra
// candidates at neighbor_step on each side, clipped to the net interior and
// outside forbidden zones.
DPConfig synthesize_config(const TechParams& tech, const Net& net, const RepeaterSolution& seed,
                           const RipParams& params);

// Full pipeline. Returns the cheapest feasible solution found, with a record
// of what each stage produced.
RipOutcome rip(const TechParams& tech, const Net& net, double tau_t, const RipParams& params = {});

}  // namespace rip
