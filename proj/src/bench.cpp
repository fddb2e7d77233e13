#include "rip/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "rip/errors.hpp"

namespace rip {

// Calibrated so a size-10, 10u-granularity library is genuinely binding at
// tight delay targets on generated benchmarks (optimal repeater widths land
// around 160-230u), while staying in a plausible 0.18um-class range.
TechParams default_tech() { return {12000.0, 1.3e-15, 1.2e-15, 1.0}; }

double uniform_real(std::mt19937_64& rng, double a, double b) {
  const double unit = (rng() >> 11) * 0x1.0p-53;
  return a + (b - a) * unit;
}

std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

Net gen_net(const GenParams& params, const TechParams& tech, std::mt19937_64& rng) {
  if (params.min_segments < 1 || params.max_segments < params.min_segments)
    throw validation_error("segment count range is invalid");
  if (!(params.min_seg_len > 0.0) || params.max_seg_len < params.min_seg_len)
    throw validation_error("segment length range is invalid");
  if (params.zone_fraction_min < 0.0 || params.zone_fraction_max >= 1.0 ||
      params.zone_fraction_max < params.zone_fraction_min)
    throw validation_error("zone fraction range is invalid");

  Net net;
  const auto n_seg = uniform_int(rng, static_cast<std::uint64_t>(params.min_segments),
                                 static_cast<std::uint64_t>(params.max_segments));
  const auto first_layer = uniform_int(rng, 0, 1);
  for (std::uint64_t i = 0; i < n_seg; ++i) {
    const double len = uniform_real(rng, params.min_seg_len, params.max_seg_len);
    const LayerRC& layer = ((i + first_layer) % 2 == 0) ? params.layer_a : params.layer_b;
    net.segments.push_back({len, layer.r, layer.c});
  }
  const double length = total_length(net);
  const double fraction = uniform_real(rng, params.zone_fraction_min, params.zone_fraction_max);
  const double zone_len = fraction * length;
  const double zone_start = uniform_real(rng, 0.0, length - zone_len);
  net.zones.push_back({zone_start, zone_start + zone_len});
  net.driver_width = params.driver_width_u * tech.u;
  net.receiver_width = params.receiver_width_u * tech.u;
  validate_net(net);
  return net;
}

MinDelayResult compute_tau_min(const TechParams& tech, const Net& net, const TauMinConfig& cfg,
                               const DPLimits& limits) {
  DPConfig dp_cfg;
  dp_cfg.widths = width_range(cfg.min_u, cfg.max_u, cfg.step_u, tech.u);
  dp_cfg.candidates = candidate_grid(net, cfg.loc_step);
  return dp_min_delay(tech, net, dp_cfg, limits);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

double parse_num(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw validation_error("");
    return v;
  } catch (const std::exception&) {
    throw validation_error(std::string("strategy: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

Strategy parse_strategy(const std::string& text) {
  Strategy s;
  s.text = text;
  const std::vector<std::string> parts = split(text, ':');
  if (parts.empty()) throw validation_error("empty strategy");
  if (parts[0] == "rip") {
    if (parts.size() != 1) throw validation_error("strategy 'rip' takes no arguments");
    s.kind = Strategy::Kind::rip;
    return s;
  }
  if (parts[0] == "dp") {
    if (parts.size() < 4 || parts.size() > 5)
      throw validation_error("expected dp:MIN:MAX:STEP[:LOC]");
    s.kind = Strategy::Kind::dp_range;
    s.min_u = parse_num(parts[1], "width minimum");
    s.max_u = parse_num(parts[2], "width maximum");
    s.step_u = parse_num(parts[3], "width step");
    if (parts.size() == 5) s.loc_step = parse_num(parts[4], "location step");
    if (!(s.min_u > 0.0) || s.max_u < s.min_u || !(s.step_u > 0.0) || !(s.loc_step > 0.0))
      throw validation_error("strategy 'dp' arguments must be positive and ordered");
    return s;
  }
  if (parts[0] == "dplib") {
    if (parts.size() < 3 || parts.size() > 5)
      throw validation_error("expected dplib:SIZE:GRAN[:MIN[:LOC]]");
    s.kind = Strategy::Kind::dp_lib;
    const double size = parse_num(parts[1], "library size");
    if (size < 1.0 || size != std::floor(size))
      throw validation_error("strategy 'dplib' size must be a positive integer");
    s.size = static_cast<int>(size);
    s.gran_u = parse_num(parts[2], "granularity");
    s.min_u = (parts.size() >= 4) ? parse_num(parts[3], "width minimum") : s.gran_u;
    if (parts.size() == 5) s.loc_step = parse_num(parts[4], "location step");
    if (!(s.gran_u > 0.0) || !(s.min_u > 0.0) || !(s.loc_step > 0.0))
      throw validation_error("strategy 'dplib' arguments must be positive");
    return s;
  }
  throw validation_error("unknown strategy '" + parts[0] + "'");
}

RunResult run_strategy(const TechParams& tech, const Net& net, double tau_t,
                       const Strategy& strategy, const RipParams& rip_params) {
  RunResult out;
  const auto t0 = std::chrono::steady_clock::now();
  if (strategy.kind == Strategy::Kind::rip) {
    RipOutcome oc = rip(tech, net, tau_t, rip_params);
    out.feasible = oc.feasible;
    if (oc.feasible) out.solution = oc.solution;
  } else {
    DPConfig cfg;
    if (strategy.kind == Strategy::Kind::dp_range)
      cfg.widths = width_range(strategy.min_u, strategy.max_u, strategy.step_u, tech.u);
    else
      cfg.widths = width_library(strategy.size, strategy.gran_u, strategy.min_u, tech.u);
    cfg.candidates = candidate_grid(net, strategy.loc_step);
    std::optional<RepeaterSolution> sol = dp_min_power(tech, net, cfg, tau_t, rip_params.limits);
    out.feasible = sol.has_value();
    if (sol) out.solution = *sol;
  }
  out.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

CsvContent sweep(const SweepOptions& opts) {
  if (opts.net_count < 1 || opts.targets < 1)
    throw validation_error("sweep needs at least one net and one target");
  if (!(opts.ratio_min > 0.0) || opts.ratio_max < opts.ratio_min)
    throw validation_error("sweep ratio range is invalid");
  if (opts.strategies.empty()) throw validation_error("sweep needs at least one strategy");

  std::vector<Strategy> strategies;
  for (const std::string& s : opts.strategies) strategies.push_back(parse_strategy(s));

  const TechParams tech = default_tech();
  CsvContent out;
  char buf[256];
  for (int k = 0; k < opts.net_count; ++k) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(k));
    const Net net = gen_net(opts.gen, tech, rng);
    std::snprintf(buf, sizeof buf, "net%02d", k);
    const std::string net_id = buf;

    const MinDelayResult ref = compute_tau_min(tech, net, opts.tau_min, opts.limits);
    std::snprintf(buf, sizeof buf, "%s tau_min_s=%.17g widths_u=%g:%g:%g grid_um=%g",
                  net_id.c_str(), ref.tau_min, opts.tau_min.min_u, opts.tau_min.max_u,
                  opts.tau_min.step_u, opts.tau_min.loc_step);
    out.comments.push_back(buf);

    for (int t = 0; t < opts.targets; ++t) {
      const double ratio =
          (opts.targets == 1)
              ? opts.ratio_min
              : opts.ratio_min + t * (opts.ratio_max - opts.ratio_min) / (opts.targets - 1);
      const double tau_t = ratio * ref.tau_min;
      for (const Strategy& strategy : strategies) {
        RunResult rr = run_strategy(tech, net, tau_t, strategy, opts.rip);
        SweepRow row;
        row.net_id = net_id;
        row.ratio = ratio;
        row.strategy = strategy.text;
        row.feasible = rr.feasible;
        row.total_width_u = rr.feasible ? rr.solution.total_width / tech.u : 0.0;
        row.delay_s = rr.feasible ? rr.solution.delay : 0.0;
        row.runtime_s = rr.runtime_s;
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

CompareReport compare(const CsvContent& csv, const std::string& reference) {
  CompareReport report;
  report.reference = reference;

  std::vector<std::string> order;
  std::map<std::string, StrategyStats> stats;
  std::map<std::string, std::set<std::string>> infeasible_nets;
  for (const SweepRow& r : csv.rows) {
    if (!stats.count(r.strategy)) {
      order.push_back(r.strategy);
      stats[r.strategy].strategy = r.strategy;
    }
    StrategyStats& s = stats[r.strategy];
    ++s.rows;
    if (r.feasible)
      ++s.feasible_rows;
    else {
      ++s.infeasible_rows;
      infeasible_nets[r.strategy].insert(r.net_id);
    }
    s.mean_runtime_s += r.runtime_s;
  }
  for (const std::string& name : order) {
    StrategyStats& s = stats[name];
    s.nets_with_infeasible = static_cast<int>(infeasible_nets[name].size());
    if (s.rows > 0) s.mean_runtime_s /= s.rows;
    report.per_strategy.push_back(s);
  }

  std::map<std::pair<std::string, double>, const SweepRow*> ref_rows;
  for (const SweepRow& r : csv.rows)
    if (r.strategy == reference) ref_rows[{r.net_id, r.ratio}] = &r;
  if (ref_rows.empty()) return report;

  for (const std::string& name : order) {
    if (name == reference) continue;
    CompareReport::VsReference vs;
    vs.baseline = name;
    double delta_sum = 0.0;
    double base_time = 0.0, ref_time = 0.0;
    std::set<std::string> violated_nets;
    for (const SweepRow& r : csv.rows) {
      if (r.strategy != name) continue;
      auto it = ref_rows.find({r.net_id, r.ratio});
      if (it == ref_rows.end()) continue;
      const SweepRow& ref = *it->second;
      if (!r.feasible && ref.feasible) {
        ++vs.baseline_only_infeasible;
        violated_nets.insert(r.net_id);
      }
      if (r.feasible && ref.feasible && r.total_width_u > 0.0) {
        ++vs.common_rows;
        delta_sum += (r.total_width_u - ref.total_width_u) / r.total_width_u * 100.0;
        base_time += r.runtime_s;
        ref_time += ref.runtime_s;
      }
    }
    vs.nets_baseline_only_infeasible = static_cast<int>(violated_nets.size());
    if (vs.common_rows > 0) {
      vs.mean_delta_pct = delta_sum / vs.common_rows;
      if (ref_time > 0.0) vs.speedup = base_time / ref_time;
    }
    report.vs_reference.push_back(vs);
  }
  return report;
}

std::string format_report(const CompareReport& report) {
  std::ostringstream os;
  char buf[256];
  os << "strategy summary\n";
  for (const StrategyStats& s : report.per_strategy) {
    std::snprintf(buf, sizeof buf,
                  "  %-18s rows=%-4d feasible=%-4d infeasible=%-4d nets_hit=%-3d mean_runtime=%.4gs\n",
                  s.strategy.c_str(), s.rows, s.feasible_rows, s.infeasible_rows,
                  s.nets_with_infeasible, s.mean_runtime_s);
    os << buf;
  }
  if (!report.vs_reference.empty()) {
    os << "versus '" << report.reference << "'\n";
    for (const auto& vs : report.vs_reference) {
      std::snprintf(buf, sizeof buf,
                    "  %-18s common=%-4d width_saving=%+.2f%% speedup=%.1fx "
                    "baseline_misses=%d (on %d nets)\n",
                    vs.baseline.c_str(), vs.common_rows, vs.mean_delta_pct, vs.speedup,
                    vs.baseline_only_infeasible, vs.nets_baseline_only_infeasible);
      os << buf;
    }
  }
  return os.str();
}

}  // namespace rip
