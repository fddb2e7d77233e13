#include "rip/analytic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rip {

namespace {

constexpr double kWidthFloorU = 0.01;   // times tech.u
constexpr double kNewtonTol = 1e-9;
constexpr int kNewtonMaxIters = 100;
constexpr double kMinDamping = 1e-4;
constexpr double kLambdaDegenerate = 1e-12;

struct StageLumps {
  std::vector<double> r;  // wire resistance of stage i, i = 0..n
  std::vector<double> c;  // wire capacitance of stage i
};

StageLumps lump_stages(const Net& net, const std::vector<Position>& positions) {
  StageLumps lumps;
  const double length = total_length(net);
  double from = 0.0;
  for (std::size_t i = 0; i <= positions.size(); ++i) {
    const double to = (i == positions.size()) ? length : positions[i];
    auto [r, c] = rc_between(net, from, to);
    lumps.r.push_back(r);
    lumps.c.push_back(c);
    from = to;
  }
  return lumps;
}

double eval_delay(const TechParams& tech, const Net& net, const std::vector<Position>& positions,
                  const std::vector<double>& widths) {
  RepeaterSolution sol;
  sol.repeaters.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    sol.repeaters.push_back({positions[i], widths[i]});
  return total_delay(tech, net, sol);
}

// Sensitivity of the total delay to width i, the bracket of the stationarity
// condition: c_o (R_prev + r_s/w_prev) - r_s (C_next + c_o w_next) / w^2.
double width_bracket(const TechParams& tech, const StageLumps& lumps,
                     const std::vector<double>& widths, double w_d, double w_r, std::size_t i) {
  const std::size_t n = widths.size();
  const double w_prev = (i == 0) ? w_d : widths[i - 1];
  const double w_next = (i + 1 == n) ? w_r : widths[i + 1];
  const double w = widths[i];
  return tech.c_o * (lumps.r[i] + tech.r_s / w_prev) -
         tech.r_s * (lumps.c[i + 1] + tech.c_o * w_next) / (w * w);
}

double scaled_norm(const std::vector<double>& residuals, double tau_t) {
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
    norm = std::max(norm, std::abs(residuals[i]));
  norm = std::max(norm, std::abs(residuals.back()) / std::max(tau_t, 1e-300));
  return norm;
}

}  // namespace

std::vector<double> width_residuals(const TechParams& tech, const Net& net,
                                    const std::vector<Position>& positions,
                                    const std::vector<double>& widths, double lambda,
                                    double tau_t) {
  if (positions.size() != widths.size())
    throw validation_error("positions and widths must have equal length");
  for (double w : widths)
    if (!(w > 0.0)) throw validation_error("repeater width must be > 0");

  const StageLumps lumps = lump_stages(net, positions);
  const std::size_t n = widths.size();
  std::vector<double> res(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    res[i] = 1.0 + lambda * width_bracket(tech, lumps, widths, net.driver_width,
                                          net.receiver_width, i);
  res[n] = eval_delay(tech, net, positions, widths) - tau_t;
  return res;
}

SolveResult solve_widths(const TechParams& tech, const Net& net,
                         const std::vector<Position>& positions, double tau_t,
                         const LagrangeState& init) {
  const std::size_t n = positions.size();
  if (n == 0) throw validation_error("width solve requires at least one repeater");
  if (init.widths.size() != n)
    throw validation_error("initial widths must match the repeater count");
  for (double w : init.widths)
    if (!(w > 0.0)) throw validation_error("initial widths must be > 0");

  const double w_floor = kWidthFloorU * tech.u;
  const double w_d = net.driver_width;
  const double w_r = net.receiver_width;
  const StageLumps lumps = lump_stages(net, positions);

  std::vector<double> w = init.widths;
  double lambda = init.lambda;
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    // The power-minimal solution lives on the branch below each width's
    // delay-stationary point (negative bracket, positive multiplier). Pull
    // any seed width that starts above its stationary point down, so the
    // Newton iteration does not drift to the power-maximizing branch.
    for (std::size_t i = 0; i < n; ++i) {
      const double w_prev = (i == 0) ? w_d : w[i - 1];
      const double w_next = (i + 1 == n) ? w_r : w[i + 1];
      const double w_star = std::sqrt(tech.r_s * (lumps.c[i + 1] + tech.c_o * w_next) /
                                      (tech.c_o * (lumps.r[i] + tech.r_s / w_prev)));
      w[i] = std::max(std::min(w[i], 0.95 * w_star), w_floor);
    }
    double b1 = width_bracket(tech, lumps, w, w_d, w_r, 0);
    if (!(b1 < 0.0)) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += width_bracket(tech, lumps, w, w_d, w_r, i);
      b1 = mean / static_cast<double>(n);
    }
    lambda = (std::abs(b1) < 1e-300) ? 1.0 : 1.0 / std::abs(b1);
  }

  SolveResult out;
  std::vector<double> res = width_residuals(tech, net, positions, w, lambda, tau_t);
  double norm = scaled_norm(res, tau_t);

  for (int iter = 0; iter < kNewtonMaxIters; ++iter) {
    if (norm <= kNewtonTol) {
      out.status = SolveStatus::converged;
      out.state = {w, lambda, norm};
      out.iterations = iter;
      return out;
    }

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double w_next = (i + 1 == n) ? w_r : w[i + 1];
      const double drive_load = tech.r_s * (lumps.c[i + 1] + tech.c_o * w_next);
      if (i > 0) jac(i, i - 1) = -lambda * tech.c_o * tech.r_s / (w[i - 1] * w[i - 1]);
      jac(i, i) = 2.0 * lambda * drive_load / (w[i] * w[i] * w[i]);
      if (i + 1 < n) jac(i, i + 1) = -lambda * tech.r_s * tech.c_o / (w[i] * w[i]);
      const double bracket = width_bracket(tech, lumps, w, w_d, w_r, i);
      jac(i, n) = bracket;
      jac(n, i) = bracket;  // delay row shares the same sensitivities
      rhs(i) = -res[i];
    }
    jac(n, n) = 0.0;
    rhs(n) = -res[n];

    // The raw system mixes scales (width rows carry lambda-weighted RC terms,
    // the delay row carries bare sensitivities around 1e-13), so equilibrate
    // rows then columns before factorizing; without this the rank test can
    // misread the matrix as singular and the solve loses most of its digits.
    Eigen::VectorXd row_sc = jac.cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index k = 0; k < row_sc.size(); ++k)
      row_sc(k) = (row_sc(k) > 0.0) ? 1.0 / row_sc(k) : 1.0;
    jac = row_sc.asDiagonal() * jac;
    rhs = row_sc.asDiagonal() * rhs;
    Eigen::VectorXd col_sc = jac.cwiseAbs().colwise().maxCoeff().transpose();
    for (Eigen::Index k = 0; k < col_sc.size(); ++k)
      col_sc(k) = (col_sc(k) > 0.0) ? 1.0 / col_sc(k) : 1.0;
    jac = jac * col_sc.asDiagonal();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      out.status = SolveStatus::no_converge;
      out.state = {w, lambda, norm};
      out.iterations = iter;
      return out;
    }
    const Eigen::VectorXd step = col_sc.asDiagonal() * lu.solve(rhs);

    // damped update: halve the step until the scaled residual improves
    double t = 1.0;
    bool accepted = false;
    bool clamped_last = false;
    while (t >= kMinDamping) {
      std::vector<double> w_try(n);
      clamped_last = false;
      for (std::size_t i = 0; i < n; ++i) {
        w_try[i] = w[i] + t * step(static_cast<Eigen::Index>(i));
        if (w_try[i] < w_floor) {
          w_try[i] = w_floor;
          clamped_last = true;
        }
      }
      const double lambda_try = lambda + t * step(static_cast<Eigen::Index>(n));
      std::vector<double> res_try = width_residuals(tech, net, positions, w_try, lambda_try, tau_t);
      const double norm_try = scaled_norm(res_try, tau_t);
      if (norm_try < norm) {
        w = std::move(w_try);
        lambda = lambda_try;
        res = std::move(res_try);
        norm = norm_try;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.status = clamped_last ? SolveStatus::non_positive_width : SolveStatus::no_converge;
      out.state = {w, lambda, norm};
      out.iterations = iter;
      return out;
    }
  }

  out.status = (norm <= kNewtonTol) ? SolveStatus::converged : SolveStatus::no_converge;
  out.state = {w, lambda, norm};
  out.iterations = kNewtonMaxIters;
  return out;
}

double dtau_dx(const TechParams& tech, const Net& net, const std::vector<Position>& positions,
               const std::vector<double>& widths, std::size_t i, Side side) {
  if (positions.size() != widths.size())
    throw validation_error("positions and widths must have equal length");
  if (i >= positions.size()) throw validation_error("repeater index out of range");
  for (double w : widths)
    if (!(w > 0.0)) throw validation_error("repeater width must be > 0");

  const std::size_t n = positions.size();
  const double length = total_length(net);
  const double x = positions[i];
  const double x_prev = (i == 0) ? 0.0 : positions[i - 1];
  const double x_next = (i + 1 == n) ? length : positions[i + 1];
  const double w_prev = (i == 0) ? net.driver_width : widths[i - 1];
  const double w_next = (i + 1 == n) ? net.receiver_width : widths[i + 1];
  const double w = widths[i];

  const double r_prev = rc_between(net, x_prev, x).first;
  const double c_next = rc_between(net, x, x_next).second;
  const auto [r, c] = unit_rc_at(net, x, side);

  return tech.c_o * r * (w - w_next) + tech.r_s * c * (1.0 / w_prev - 1.0 / w) + c * r_prev -
         r * c_next;
}

namespace {

struct ProposedMove {
  std::size_t index;
  Position target;
};

// A move is skipped when it would land strictly inside a zone or hop across
// one; movement through zones is out of scope.
bool move_blocked_by_zone(const Net& net, Position from, Position to) {
  if (in_forbidden(net, to)) return true;
  const double lo = std::min(from, to);
  const double hi = std::max(from, to);
  for (const ForbiddenZone& z : net.zones)
    if (lo <= z.start && z.end <= hi) return true;
  return false;
}

// Clamps a proposed target between its neighbors (midpoint minus a 1 um
// guard) and inside the net interior. Returns false when no legal strictly
// directional move remains.
bool clamp_move(const Net& net, const std::vector<Position>& positions, std::size_t i,
                double step, bool downstream, Position& target) {
  const double length = total_length(net);
  const double x = positions[i];
  constexpr double kGuard = 1.0;
  if (downstream) {
    target = x + step;
    const double limit = (i + 1 < positions.size()) ? positions[i + 1] : length;
    if (target >= limit) target = 0.5 * (x + limit) - kGuard;
    if (target >= length) target = length - kGuard;
    if (target <= x) return false;
  } else {
    target = x - step;
    const double limit = (i > 0) ? positions[i - 1] : 0.0;
    if (target <= limit) target = 0.5 * (x + limit) + kGuard;
    if (target <= 0.0) target = kGuard;
    if (target >= x) return false;
  }
  return true;
}

}  // namespace

RefineResult refine(const TechParams& tech, const Net& net, const RepeaterSolution& init,
                    double tau_t, const RefineParams& params) {
  if (!(params.step > 0.0) || !(params.eps0 > 0.0) || params.max_iters < 1)
    throw validation_error("refine parameters must be positive");

  RefineResult out;
  const std::size_t n = init.repeaters.size();
  if (n == 0) {
    out.solution = init;
    out.solution.delay = total_delay(tech, net, init);
    out.solution.total_width = power_proxy(init);
    out.converged = true;
    return out;
  }

  std::vector<Position> positions;
  std::vector<double> widths;
  positions.reserve(n);
  widths.reserve(n);
  for (const Repeater& r : init.repeaters) {
    positions.push_back(r.x);
    widths.push_back(r.width);
  }

  auto as_solution = [&](const std::vector<Position>& pos, const std::vector<double>& wid) {
    RepeaterSolution sol;
    for (std::size_t i = 0; i < pos.size(); ++i) sol.repeaters.push_back({pos[i], wid[i]});
    sol.total_width = power_proxy(sol);
    sol.delay = total_delay(tech, net, sol);
    return sol;
  };

  SolveResult solved = solve_widths(tech, net, positions, tau_t, {widths, 0.0, 0.0});
  if (!solved.ok()) {
    out.solution = as_solution(positions, widths);
    out.converged = false;
    out.lambda = solved.state.lambda;
    return out;
  }
  widths = solved.state.widths;
  double lambda = solved.state.lambda;
  double w_total = 0.0;
  for (double w : widths) w_total += w;
  out.trace.accepted_widths.push_back(w_total);
  out.trace.positions_log.push_back(positions);
  out.converged = true;

  std::vector<char> frozen(n, 0);
  double eps = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (eps > params.eps0 && iter < params.max_iters) {
    ++iter;
    const double w_before = w_total;

    std::vector<ProposedMove> moves;
    if (std::abs(lambda) <= kLambdaDegenerate) {
      out.lambda_degenerate = true;
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (frozen[i]) continue;
        const double d_plus = dtau_dx(tech, net, positions, widths, i, Side::right);
        const double d_minus = dtau_dx(tech, net, positions, widths, i, Side::left);
        const bool viol_plus = lambda * d_plus < 0.0;
        const bool viol_minus = lambda * d_minus > 0.0;
        bool downstream;
        if (viol_plus && viol_minus) {
          // direction with the larger predicted width reduction
          downstream = std::abs(lambda * d_plus) >= std::abs(lambda * d_minus);
        } else if (viol_plus) {
          downstream = true;
        } else if (viol_minus) {
          downstream = false;
        } else {
          continue;
        }
        Position target;
        if (!clamp_move(net, positions, i, params.step, downstream, target)) continue;
        if (move_blocked_by_zone(net, positions[i], target)) {
          ++out.trace.zone_skips;
          continue;
        }
        moves.push_back({i, target});
      }
    }
    std::fill(frozen.begin(), frozen.end(), 0);

    if (!moves.empty()) {
      std::vector<Position> pos_try = positions;
      for (const ProposedMove& m : moves) pos_try[m.index] = m.target;
      // each move is legal against its current neighbors, but two adjacent
      // moves can still cross when the gap is below twice the step; such a
      // joint candidate is rejected outright and retried repeater by repeater
      const bool joint_ordered =
          std::adjacent_find(pos_try.begin(), pos_try.end(),
                             [](double a, double b) { return a >= b; }) == pos_try.end();
      bool applied = false;
      if (joint_ordered) {
        SolveResult s = solve_widths(tech, net, pos_try, tau_t, {widths, lambda, 0.0});
        if (s.ok()) {
          double total_try = 0.0;
          for (double w : s.state.widths) total_try += w;
          if (total_try <= w_total) {
            positions = std::move(pos_try);
            widths = s.state.widths;
            lambda = s.state.lambda;
            w_total = total_try;
            out.trace.moves_applied += static_cast<int>(moves.size());
            applied = true;
          }
        }
      }
      if (!applied) {
        // the joint move overshot; retry each repeater alone and freeze the
        // ones whose individual move does not help
        ++out.trace.moves_rolled_back;
        for (const ProposedMove& m : moves) {
          std::vector<Position> single = positions;
          single[m.index] = m.target;
          const bool strictly_increasing =
              std::adjacent_find(single.begin(), single.end(),
                                 [](double a, double b) { return a >= b; }) == single.end();
          if (!strictly_increasing ||
              move_blocked_by_zone(net, positions[m.index], m.target)) {
            frozen[m.index] = 1;
            continue;
          }
          SolveResult si = solve_widths(tech, net, single, tau_t, {widths, lambda, 0.0});
          double ti = 0.0;
          if (si.ok())
            for (double w : si.state.widths) ti += w;
          if (si.ok() && ti < w_total) {
            positions = std::move(single);
            widths = si.state.widths;
            lambda = si.state.lambda;
            w_total = ti;
            ++out.trace.moves_applied;
          } else {
            frozen[m.index] = 1;
          }
        }
      }
    }

    eps = (w_before > 0.0) ? (w_before - w_total) / w_before : 0.0;
    out.trace.accepted_widths.push_back(w_total);
    out.trace.positions_log.push_back(positions);
  }

  out.iterations = iter;
  out.lambda = lambda;
  out.solution = as_solution(positions, widths);
  return out;
}

}  // namespace rip
