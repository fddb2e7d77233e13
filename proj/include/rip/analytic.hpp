#pragma once

#include <vector>

#include "rip/delay_power.hpp"
#include "rip/net_model.hpp"

namespace rip {

/// Continuous repeater widths plus the multiplier coupling total width to
/// the delay constraint, as produced by the width solver.
struct LagrangeState {
  std::vector<double> widths;  ///< n real widths, all > 0
  double lambda = 0.0;         ///< 0 asks the solver to self-initialize
  double residual_norm = 0.0;  ///< scaled max-norm of the system residual
};

enum class SolveStatus {
  converged,
  no_converge,         ///< iteration cap or singular Jacobian
  non_positive_width,  ///< damping could not keep iterates positive
};

struct SolveResult {
  SolveStatus status = SolveStatus::no_converge;
  LagrangeState state;
  int iterations = 0;
  bool ok() const { return status == SolveStatus::converged; }
};

/// Knobs of the iterative location refinement.
struct RefineParams {
  double step = 25.0;      ///< movement distance per iteration, um
  double eps0 = 1e-3;      ///< relative width-improvement stop threshold
  int max_iters = 200;
  double fd_probe = 0.01;  ///< um, probe for finite-difference checks
};

/// Residual of the stationarity system: components 1..n are
/// 1 + lambda * [c_o (R_{i-1} + r_s/w_{i-1}) - r_s (C_i + c_o w_{i+1}) / w_i^2]
/// with w_0 = driver width and w_{n+1} = receiver width; component n+1 is
/// total delay minus tau_t.
std::vector<double> width_residuals(const TechParams& tech, const Net& net,
                                    const std::vector<Position>& positions,
                                    const std::vector<double>& widths, double lambda,
                                    double tau_t);

/// Damped Newton solve of the n+1 stationarity equations for (w_1..w_n,
/// lambda) at fixed positions: on success the delay equals tau_t and every
/// width satisfies the stationarity condition to the solver tolerance.
/// init.lambda == 0 self-initializes the multiplier from the first width's
/// delay sensitivity.
SolveResult solve_widths(const TechParams& tech, const Net& net,
                         const std::vector<Position>& positions, double tau_t,
                         const LagrangeState& init);

/// One-sided derivative of the total delay with respect to repeater i's
/// position (i is 0-based here), using the per-unit RC on the given side of
/// x_i. At a segment boundary the two sides differ.
double dtau_dx(const TechParams& tech, const Net& net, const std::vector<Position>& positions,
               const std::vector<double>& widths, std::size_t i, Side side);

/// Per-iteration record of the refinement loop, for reporting and tests.
struct RefineTrace {
  std::vector<double> accepted_widths;               ///< total width after each accepted solve
  std::vector<std::vector<Position>> positions_log;  ///< positions after each iteration
  int moves_applied = 0;
  int moves_rolled_back = 0;
  int zone_skips = 0;
};

struct RefineResult {
  RepeaterSolution solution;  ///< continuous widths; delay evaluated
  double lambda = 0.0;
  bool converged = false;          ///< every accepted width solve succeeded
  bool lambda_degenerate = false;  ///< a solve returned |lambda| <= 1e-12
  int iterations = 0;
  RefineTrace trace;
};

/// Iterative width-and-location refinement: solve widths and lambda, then
/// repeatedly move repeaters against the sign conditions on the one-sided
/// delay derivatives, re-lump and re-solve, until the relative width
/// improvement drops to eps0 or the iteration cap is reached. Moves that
/// land in (or would hop over) a forbidden zone are skipped; moves whose
/// re-solve fails or increases total width are rolled back and the repeater
/// is frozen for one iteration. Accepted total widths never increase.
/// An input without repeaters is returned unchanged.
RefineResult refine(const TechParams& tech, const Net& net, const RepeaterSolution& init,
                    double tau_t, const RefineParams& params);

}  // namespace rip
