#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rip/dp_engine.hpp"
#include "rip/io.hpp"
#include "rip/net_model.hpp"
#include "rip/pipeline.hpp"

namespace rip {

TechParams default_tech();

// Portable draws on top of mt19937_64, so generated benchmarks are
// bit-identical across standard libraries:
//   uniform_real(a, b) = a + (b - a) * ((rng() >> 11) * 2^-53)
//   uniform_int(lo, hi) = lo + rng() % (hi - lo + 1)
double uniform_real(std::mt19937_64& rng, double a, double b);
std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi);

struct LayerRC {
  double r;  // ohm per um
  double c;  // farad per um
};

// Random two-pin net recipe. Draw order per net (frozen for reproducibility):
// segment count, first layer index, one length per segment, zone fraction,
// zone start. Layers alternate between layer_a and layer_b.
struct GenParams {
  int min_segments = 4;
  int max_segments = 10;
  double min_seg_len = 1000.0;  // um
  double max_seg_len = 2500.0;
  double zone_fraction_min = 0.20;  // of total length
  double zone_fraction_max = 0.40;
  LayerRC layer_a{0.075, 2.0e-16};
  LayerRC layer_b{0.045, 2.5e-16};
  double driver_width_u = 100.0;
  double receiver_width_u = 100.0;
};

Net gen_net(const GenParams& params, const TechParams& tech, std::mt19937_64& rng);

// Reference search space used to anchor delay targets: a dense width range on
// a dense location grid.
struct TauMinConfig {
  double min_u = 10.0;
  double max_u = 400.0;
  double step_u = 10.0;
  double loc_step = 50.0;  // um
};

MinDelayResult compute_tau_min(const TechParams& tech, const Net& net,
                               const TauMinConfig& cfg = {}, const DPLimits& limits = {});

// Solver strategies, parsed from:
//   "rip"                      pipeline with default parameters
//   "dp:MIN:MAX:STEP[:LOC]"    DP over width range MIN..MAX step STEP (u),
//                              locations every LOC um (default 200)
//   "dplib:SIZE:GRAN[:MIN[:LOC]]"  DP over SIZE widths spaced GRAN starting
//                              at MIN (default GRAN), locations every LOC um
struct Strategy {
  enum class Kind { rip, dp_range, dp_lib };
  Kind kind = Kind::rip;
  double min_u = 10.0;
  double max_u = 400.0;
  double step_u = 40.0;
  int size = 10;
  double gran_u = 10.0;
  double loc_step = 200.0;
  std::string text;  // the string it was parsed from
};

Strategy parse_strategy(const std::string& text);

struct RunResult {
  bool feasible = false;
  RepeaterSolution solution;
  double runtime_s = 0.0;
};

RunResult run_strategy(const TechParams& tech, const Net& net, double tau_t,
                       const Strategy& strategy, const RipParams& rip_params = {});

// A sweep runs every strategy on every (net, delay target) cell. Net k is
// generated from mt19937_64(seed + k); targets are evenly spaced delay
// ratios applied to each net's reference minimum delay.
struct SweepOptions {
  int net_count = 20;
  std::uint64_t seed = 1;
  int targets = 20;
  double ratio_min = 1.05;
  double ratio_max = 2.05;
  std::vector<std::string> strategies = {"rip"};
  GenParams gen;
  TauMinConfig tau_min;
  RipParams rip;
  DPLimits limits;
};

CsvContent sweep(const SweepOptions& opts);

struct StrategyStats {
  std::string strategy;
  int rows = 0;
  int feasible_rows = 0;
  int infeasible_rows = 0;
  int nets_with_infeasible = 0;
  double mean_runtime_s = 0.0;
};

struct CompareReport {
  std::vector<StrategyStats> per_strategy;
  struct VsReference {
    std::string baseline;
    int common_rows = 0;         // both the baseline and the reference feasible
    double mean_delta_pct = 0.0; // mean width saving of the reference vs baseline
    double speedup = 0.0;        // mean baseline runtime / mean reference runtime
    int baseline_only_infeasible = 0;  // rows the reference solves but the baseline cannot
    int nets_baseline_only_infeasible = 0;
  };
  std::vector<VsReference> vs_reference;
  std::string reference;
};

CompareReport compare(const CsvContent& csv, const std::string& reference = "rip");
std::string format_report(const CompareReport& report);

}  // namespace rip
