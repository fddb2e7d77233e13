#include "rip/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rip {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StageRecord record_stage(const std::string& name, const std::optional<RepeaterSolution>& sol,
                         double runtime_s, std::string note = {}) {
  StageRecord rec;
  rec.stage = name;
  rec.runtime_s = runtime_s;
  rec.note = std::move(note);
  if (sol) {
    rec.feasible = true;
    rec.delay = sol->delay;
    rec.total_width = sol->total_width;
  }
  return rec;
}

std::vector<double> rounded_widths(const TechParams& tech, const RepeaterSolution& seed,
                                   double quantum_u, bool bump_up) {
  const double q = quantum_u * tech.u;
  std::vector<double> out;
  for (const Repeater& r : seed.repeaters) {
    double w = std::round(r.width / q) * q;
    if (bump_up) w += q;
    out.push_back(std::max(w, q));
  }
  return out;
}

}  // namespace

DPConfig synthesize_config(const TechParams& tech, const Net& net, const RepeaterSolution& seed,
                           const RipParams& params) {
  if (!(params.round_quantum_u > 0.0) || params.width_neighbors < 0 ||
      params.neighbor_count < 0 || !(params.neighbor_step > 0.0))
    throw validation_error("synthesis parameters must be positive");

  DPConfig cfg;
  const double q = params.round_quantum_u * tech.u;
  for (double w : rounded_widths(tech, seed, params.round_quantum_u, false))
    for (int k = -params.width_neighbors; k <= params.width_neighbors; ++k)
      cfg.widths.push_back(std::max(w + k * q, q));
  std::sort(cfg.widths.begin(), cfg.widths.end());
  cfg.widths.erase(std::unique(cfg.widths.begin(), cfg.widths.end()), cfg.widths.end());

  const double length = total_length(net);
  for (const Repeater& r : seed.repeaters) {
    for (int k = -params.neighbor_count; k <= params.neighbor_count; ++k) {
      const double x = r.x + k * params.neighbor_step;
      if (x <= 0.0 || x >= length) continue;
      if (in_forbidden(net, x)) continue;
      cfg.candidates.push_back(x);
    }
  }
  std::sort(cfg.candidates.begin(), cfg.candidates.end());
  cfg.candidates.erase(std::unique(cfg.candidates.begin(), cfg.candidates.end()),
                       cfg.candidates.end());
  if (cfg.candidates.empty())
    throw validation_error("synthesized location set is empty");
  return cfg;
}

RipOutcome rip(const TechParams& tech, const Net& net, double tau_t, const RipParams& params) {
  validate_net(net);
  if (!(tau_t > 0.0)) throw validation_error("delay target must be > 0");

  RipOutcome out;

  // coarse pass: small width library on a uniform location grid
  DPConfig coarse;
  for (double w : params.coarse_widths_u) coarse.widths.push_back(w * tech.u);
  coarse.candidates = candidate_grid(net, params.coarse_loc_step);

  auto t0 = std::chrono::steady_clock::now();
  std::optional<RepeaterSolution> coarse_sol =
      dp_min_power(tech, net, coarse, tau_t, params.limits);
  out.stages.push_back(record_stage("coarse_dp", coarse_sol, seconds_since(t0)));

  RepeaterSolution seed;
  if (coarse_sol) {
    seed = *coarse_sol;
  } else {
    // the coarse grid cannot meet the target as a budget; check whether its
    // fastest point does, and seed refinement from it if so
    t0 = std::chrono::steady_clock::now();
    MinDelayResult md = dp_min_delay(tech, net, coarse, params.limits);
    const bool usable = md.tau_min <= tau_t;
    out.stages.push_back(record_stage("coarse_min_delay",
                                      usable ? std::optional<RepeaterSolution>(md.solution)
                                             : std::nullopt,
                                      seconds_since(t0), "min-delay seed"));
    if (!usable) return out;
    seed = md.solution;
  }

  if (seed.repeaters.empty()) {
    // the unbuffered line already meets the target; nothing to place
    out.feasible = true;
    out.solution = seed;
    return out;
  }

  t0 = std::chrono::steady_clock::now();
  RefineResult rr = refine(tech, net, seed, tau_t, params.refine);
  out.lambda_degenerate = rr.lambda_degenerate;
  out.refine_iterations = rr.iterations;
  out.stages.push_back(record_stage("refine", rr.solution, seconds_since(t0),
                                    rr.converged ? std::string{} : "width solve failed"));

  // fine pass: DP restricted to the neighborhood of the refined solution
  const RepeaterSolution& synth_seed = rr.solution;
  DPConfig fine = synthesize_config(tech, net, synth_seed, params);
  t0 = std::chrono::steady_clock::now();
  std::optional<RepeaterSolution> fine_sol = dp_min_power(tech, net, fine, tau_t, params.limits);
  std::string fine_note;
  if (!fine_sol) {
    // rounding widths down may have cost just enough speed; widen the
    // library by one quantum above each rounded seed width and retry once
    std::vector<double> bumped = rounded_widths(tech, synth_seed, params.round_quantum_u, true);
    fine.widths.insert(fine.widths.end(), bumped.begin(), bumped.end());
    std::sort(fine.widths.begin(), fine.widths.end());
    fine.widths.erase(std::unique(fine.widths.begin(), fine.widths.end()), fine.widths.end());
    fine_sol = dp_min_power(tech, net, fine, tau_t, params.limits);
    fine_note = "retried with widened library";
  }
  out.stages.push_back(record_stage("fine_dp", fine_sol, seconds_since(t0), fine_note));

  // keep the cheapest feasible result seen by either DP pass
  auto better = [](const RepeaterSolution& a, const RepeaterSolution& b) {
    if (a.total_width != b.total_width) return a.total_width < b.total_width;
    if (a.delay != b.delay) return a.delay < b.delay;
    return a.repeaters.size() < b.repeaters.size();
  };
  std::optional<RepeaterSolution> best;
  if (coarse_sol) best = *coarse_sol;
  if (fine_sol && (!best || better(*fine_sol, *best))) best = *fine_sol;
  if (!best) return out;

  out.feasible = true;
  out.solution = *best;
  return out;
}

}  // namespace rip
