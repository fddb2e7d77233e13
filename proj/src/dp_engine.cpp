#include "rip/dp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rip {

namespace {

struct TraceNode {
  std::int32_t parent = -1;
  std::int32_t cand = -1;
  std::int32_t width = -1;
};

bool label_key_less(const DPLabel& a, const DPLabel& b) {
  if (a.c_load != b.c_load) return a.c_load < b.c_load;
  if (a.d_down != b.d_down) return a.d_down < b.d_down;
  if (a.w_total != b.w_total) return a.w_total < b.w_total;
  return a.count < b.count;
}

// Staircase of kept (d_down, w_total) points: d ascending, w strictly
// descending. A query point is covered iff some entry has d <= qd, w <= qw.
class Staircase {
public:
  void clear() { steps_.clear(); }

  bool covered(double d, double w) const {
    // last entry with d_step <= d holds the smallest w among them
    auto it = std::upper_bound(steps_.begin(), steps_.end(), d,
                               [](double v, const std::pair<double, double>& s) { return v < s.first; });
    if (it == steps_.begin()) return false;
    return std::prev(it)->second <= w;
  }

  void insert(double d, double w) {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), d,
                               [](double v, const std::pair<double, double>& s) { return v < s.first; });
    auto last = it;
    while (last != steps_.end() && last->second >= w) ++last;
    if (it != last) {
      it = steps_.erase(it, last);
    }
    steps_.insert(it, {d, w});
  }

private:
  std::vector<std::pair<double, double>> steps_;
};

// Weak-dominance filter after sorting by (c_load, d_down, w_total, count):
// any earlier label in sort order is an eligible dominator of a later one.
std::vector<DPLabel> prune_sorted(std::vector<DPLabel> labels) {
  std::sort(labels.begin(), labels.end(), label_key_less);
  Staircase stairs;
  std::vector<DPLabel> kept;
  kept.reserve(labels.size());
  for (const DPLabel& l : labels) {
    if (stairs.covered(l.d_down, l.w_total)) continue;
    stairs.insert(l.d_down, l.w_total);
    kept.push_back(l);
  }
  return kept;
}

class Sweep {
public:
  Sweep(const TechParams& tech, const Net& net, const DPConfig& cfg, const DPLimits& limits)
      : tech_(tech), net_(net), cfg_(cfg), limits_(limits) {
    validate();
  }

  // Runs the receiver-to-driver sweep and leaves the finalized labels
  // (delay in d_down, load term already folded in) in finals_.
  void run() {
    std::vector<DPLabel> live;
    live.push_back({tech_.c_o * net_.receiver_width, 0.0, 0.0, 0, -1});

    double right = total_length(net_);
    for (std::int32_t ci = static_cast<std::int32_t>(cfg_.candidates.size()) - 1; ci >= 0; --ci) {
      const double x = cfg_.candidates[ci];
      cross_wire(live, x, right);
      right = x;
      fork_at(live, ci);
      if (limits_.prune) live = prune_sorted(std::move(live));
      check_cap(live.size());
    }
    cross_wire(live, 0.0, right);
    for (DPLabel& l : live)
      l.d_down += tech_.r_s * tech_.c_p + (tech_.r_s / net_.driver_width) * l.c_load;
    finals_ = std::move(live);
  }

  const std::vector<DPLabel>& finals() const { return finals_; }

  RepeaterSolution reconstruct(const DPLabel& label) const {
    RepeaterSolution sol;
    for (std::int32_t t = label.trace; t >= 0; t = arena_[t].parent) {
      const TraceNode& node = arena_[t];
      sol.repeaters.push_back({cfg_.candidates[node.cand], cfg_.widths[node.width]});
    }
    // the trace chain runs driver side outward, so positions are ascending
    sol.delay = label.d_down;
    sol.total_width = label.w_total;
    return sol;
  }

private:
  void validate() {
    if (cfg_.widths.empty()) throw validation_error("dp width library is empty");
    for (std::size_t i = 0; i < cfg_.widths.size(); ++i) {
      if (!(cfg_.widths[i] > 0.0)) throw validation_error("dp width library has a non-positive width");
      if (i > 0 && !(cfg_.widths[i] > cfg_.widths[i - 1]))
        throw validation_error("dp width library not strictly increasing");
    }
    const double length = total_length(net_);
    for (std::size_t i = 0; i < cfg_.candidates.size(); ++i) {
      const double x = cfg_.candidates[i];
      if (!(x > 0.0) || !(x < length))
        throw validation_error("dp candidate at " + std::to_string(x) + " um is not interior");
      if (in_forbidden(net_, x))
        throw validation_error("dp candidate at " + std::to_string(x) + " um is forbidden");
      if (i > 0 && !(x > cfg_.candidates[i - 1]))
        throw validation_error("dp candidates not strictly increasing");
    }
  }

  // Crossing the wire span (a, b) receiver-to-driver, one pi lump per
  // uniform piece. Dominance order is preserved, so no re-prune is needed.
  void cross_wire(std::vector<DPLabel>& live, double a, double b) {
    const std::vector<WirePiece> pieces = pieces_between(net_, a, b);
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
      const double pr = it->r * it->length;
      const double pc = it->c * it->length;
      for (DPLabel& l : live) {
        l.d_down += pr * (0.5 * pc + l.c_load);
        l.c_load += pc;
      }
    }
  }

  void fork_at(std::vector<DPLabel>& live, std::int32_t ci) {
    const std::size_t base = live.size();
    const std::int32_t nw = static_cast<std::int32_t>(cfg_.widths.size());
    std::vector<DPLabel> merged;
    merged.reserve(base * (1 + cfg_.widths.size()));
    merged.insert(merged.end(), live.begin(), live.end());

    std::vector<DPLabel> group;
    for (std::int32_t wi = 0; wi < nw; ++wi) {
      const double w = cfg_.widths[wi];
      const double drive = tech_.r_s / w;
      const double c_new = tech_.c_o * w;
      group.clear();
      group.reserve(base);
      for (std::size_t pi = 0; pi < base; ++pi) {
        const DPLabel& p = live[pi];
        DPLabel f;
        f.c_load = c_new;
        f.d_down = p.d_down + tech_.r_s * tech_.c_p + drive * p.c_load;
        f.w_total = p.w_total + w;
        f.count = p.count + 1;
        // pending trace: parent index and width recovered after pruning
        f.trace = -static_cast<std::int32_t>(pi * nw + wi) - 2;
        group.push_back(f);
      }
      if (limits_.prune) group = prune_sorted(std::move(group));
      merged.insert(merged.end(), group.begin(), group.end());
    }

    if (limits_.prune) merged = prune_sorted(std::move(merged));
    for (DPLabel& l : merged) {
      if (l.trace <= -2) {
        const std::int32_t enc = -(l.trace + 2);
        const std::int32_t pi = enc / nw;
        const std::int32_t wi = enc % nw;
        arena_.push_back({live[pi].trace, ci, wi});
        l.trace = static_cast<std::int32_t>(arena_.size()) - 1;
      }
    }
    live = std::move(merged);
  }

  void check_cap(std::size_t n) const {
    if (limits_.max_live_labels != 0 && n > limits_.max_live_labels)
      throw resource_limit_error("dp live label cap exceeded: " + std::to_string(n) + " > " +
                                 std::to_string(limits_.max_live_labels));
  }

  const TechParams& tech_;
  const Net& net_;
  const DPConfig& cfg_;
  const DPLimits& limits_;
  std::vector<TraceNode> arena_;
  std::vector<DPLabel> finals_;
};

}  // namespace

std::vector<DPLabel> prune_dominated(std::vector<DPLabel> labels) {
  return prune_sorted(std::move(labels));
}

std::optional<RepeaterSolution> dp_min_power(const TechParams& tech, const Net& net,
                                             const DPConfig& cfg, double tau_t,
                                             const DPLimits& limits) {
  if (!(tau_t > 0.0)) throw validation_error("timing target must be > 0");
  Sweep sweep(tech, net, cfg, limits);
  sweep.run();

  const DPLabel* best = nullptr;
  for (const DPLabel& l : sweep.finals()) {
    if (l.d_down > tau_t) continue;
    if (!best || l.w_total < best->w_total ||
        (l.w_total == best->w_total &&
         (l.d_down < best->d_down || (l.d_down == best->d_down && l.count < best->count))))
      best = &l;
  }
  if (!best) return std::nullopt;
  return sweep.reconstruct(*best);
}

MinDelayResult dp_min_delay(const TechParams& tech, const Net& net, const DPConfig& cfg,
                            const DPLimits& limits) {
  Sweep sweep(tech, net, cfg, limits);
  sweep.run();

  const DPLabel* best = nullptr;
  for (const DPLabel& l : sweep.finals()) {
    if (!best || l.d_down < best->d_down ||
        (l.d_down == best->d_down &&
         (l.w_total < best->w_total || (l.w_total == best->w_total && l.count < best->count))))
      best = &l;
  }
  MinDelayResult res;
  res.solution = sweep.reconstruct(*best);
  res.tau_min = best->d_down;
  return res;
}

std::vector<double> width_range(double min_u, double max_u, double step_u, double u) {
  if (!(min_u > 0.0) || !(step_u > 0.0) || !(max_u >= min_u))
    throw validation_error("width range requires 0 < min <= max and step > 0");
  std::vector<double> widths;
  for (double w = min_u; w <= max_u + 1e-9; w += step_u) widths.push_back(w * u);
  return widths;
}

std::vector<double> width_library(int size, double gran_u, double min_u, double u) {
  if (size < 1 || !(gran_u > 0.0) || !(min_u > 0.0))
    throw validation_error("width library requires size >= 1, gran > 0, min > 0");
  std::vector<double> widths;
  widths.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) widths.push_back((min_u + gran_u * i) * u);
  return widths;
}

}  // namespace rip
