#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rip/analytic.hpp"
#include "support.hpp"

using namespace rip;

namespace {

const TechParams kTech{7000.0, 2.0e-15, 1.5e-15, 1.0};

double delay_at(const Net& net, const std::vector<Position>& xs, const std::vector<double>& ws) {
  RepeaterSolution sol;
  for (std::size_t i = 0; i < xs.size(); ++i) sol.repeaters.push_back({xs[i], ws[i]});
  return total_delay(kTech, net, sol);
}

// stationary width of a single repeater at x on a given net
double stationary_width(const Net& net, double x) {
  const double r0 = rc_between(net, 0.0, x).first;
  const double c1 = rc_between(net, x, total_length(net)).second;
  return std::sqrt(kTech.r_s * (c1 + kTech.c_o * net.receiver_width) /
                   (kTech.c_o * (r0 + kTech.r_s / net.driver_width)));
}

bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace

TEST_CASE("width_residuals has the documented shape") {
  const Net net = testsup::flat_net(6000.0, 0.075, 2e-16);
  const std::vector<Position> xs{2000.0, 4000.0};
  const std::vector<double> ws{150.0, 180.0};
  const double tau_t = 1e-9;

  const auto res = width_residuals(kTech, net, xs, ws, 0.0, tau_t);
  REQUIRE(res.size() == 3);
  CHECK(res[0] == 1.0);  // lambda = 0 leaves only the constant term
  CHECK(res[1] == 1.0);
  CHECK(res[2] == doctest::Approx(delay_at(net, xs, ws) - tau_t).epsilon(1e-15));

  CHECK_THROWS_AS(width_residuals(kTech, net, xs, {150.0}, 0.0, tau_t), validation_error);
  CHECK_THROWS_AS(width_residuals(kTech, net, xs, {150.0, 0.0}, 0.0, tau_t), validation_error);
}

TEST_CASE("the stationarity bracket equals the delay gradient in width") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Net net = testsup::random_net(rng);
    const RepeaterSolution sol = testsup::random_solution(net, rng, 5, 40.0, 350.0);
    if (sol.repeaters.empty()) continue;
    std::vector<Position> xs;
    std::vector<double> ws;
    for (const Repeater& r : sol.repeaters) {
      xs.push_back(r.x);
      ws.push_back(r.width);
    }
    // recover the bracket from the residual with a multiplier large enough
    // that lambda * bracket is O(1); extracting it at lambda = 1 would lose
    // ~13 digits to cancellation against the constant term
    const double lambda_probe = 1e12;
    const auto res = width_residuals(kTech, net, xs, ws, lambda_probe, 1e-9);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const double bracket = (res[i] - 1.0) / lambda_probe;
      // five-point stencil: wide steps keep the difference above roundoff
      // while the O(h^4) truncation stays far below the tolerance
      const double h = 1e-2 * ws[i];
      auto at = [&](double dw) {
        std::vector<double> v = ws;
        v[i] += dw;
        return delay_at(net, xs, v);
      };
      const double fd =
          (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
      CHECK(close_rel(bracket, fd, 1e-6, 1e-18));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("solve_widths finds the bisection root for one repeater") {
  const Net net = testsup::flat_net(8000.0, 0.075, 2e-16);
  const double x = 4000.0;
  const double w_star = stationary_width(net, x);
  const double tau_star = delay_at(net, {x}, {w_star});
  const double tau_t = 1.05 * tau_star;

  // independent root on the rising-resistance branch (w < w_star)
  double lo = 0.01, hi = w_star;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (delay_at(net, {x}, {mid}) > tau_t)
      lo = mid;
    else
      hi = mid;
  }
  const double w_ref = 0.5 * (lo + hi);

  const SolveResult sr = solve_widths(kTech, net, {x}, tau_t, {{0.5 * w_star}, 0.0, 0.0});
  REQUIRE(sr.ok());
  REQUIRE(sr.state.widths.size() == 1);
  CHECK(close_rel(sr.state.widths[0], w_ref, 1e-8));
  CHECK(sr.state.widths[0] < w_star);
  CHECK(sr.state.lambda > 0.0);
  CHECK(delay_at(net, {x}, sr.state.widths) == doctest::Approx(tau_t).epsilon(1e-9));

  const auto res = width_residuals(kTech, net, {x}, sr.state.widths, sr.state.lambda, tau_t);
  CHECK(std::abs(res[0]) <= 1e-9);
}

TEST_CASE("solve_widths meets the target and the stationarity conditions") {
  const Net net = testsup::two_layer_net();
  const std::vector<Position> xs{1800.0, 3600.0, 6600.0};
  const std::vector<double> init{150.0, 150.0, 150.0};
  const double tau_t = 1.3 * delay_at(net, xs, init);

  const SolveResult sr = solve_widths(kTech, net, xs, tau_t, {init, 0.0, 0.0});
  REQUIRE(sr.ok());
  CHECK(delay_at(net, xs, sr.state.widths) == doctest::Approx(tau_t).epsilon(1e-9));

  const auto res = width_residuals(kTech, net, xs, sr.state.widths, sr.state.lambda, tau_t);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(res[i]) <= 1e-9);
  CHECK(std::abs(res.back()) <= 1e-9 * tau_t);

  // at the solution, every width's delay gradient equals -1/lambda
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double h = 1e-6 * sr.state.widths[i];
    std::vector<double> up = sr.state.widths, dn = sr.state.widths;
    up[i] += h;
    dn[i] -= h;
    const double fd = (delay_at(net, xs, up) - delay_at(net, xs, dn)) / (2.0 * h);
    CHECK(close_rel(fd, -1.0 / sr.state.lambda, 1e-5));
  }
}

TEST_CASE("solve_widths self-initializes the multiplier") {
  const Net net = testsup::flat_net(7000.0, 0.075, 2e-16);
  const std::vector<Position> xs{2500.0, 5000.0};
  const std::vector<double> init{120.0, 120.0};
  const double tau_t = 1.2 * delay_at(net, xs, init);

  const SolveResult auto_init = solve_widths(kTech, net, xs, tau_t, {init, 0.0, 0.0});
  REQUIRE(auto_init.ok());
  CHECK(auto_init.state.lambda > 0.0);
  CHECK(delay_at(net, xs, auto_init.state.widths) == doctest::Approx(tau_t).epsilon(1e-9));

  // a warm restart from the converged state is a fixpoint of the iteration
  const SolveResult warm = solve_widths(kTech, net, xs, tau_t,
                                        {auto_init.state.widths, auto_init.state.lambda, 0.0});
  REQUIRE(warm.ok());
  CHECK(warm.iterations <= 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(close_rel(auto_init.state.widths[i], warm.state.widths[i], 1e-6));
}

TEST_CASE("solve_widths reports failure on an unreachable target") {
  const Net net = testsup::flat_net(8000.0, 0.075, 2e-16);
  const double x = 4000.0;
  const double tau_star = delay_at(net, {x}, {stationary_width(net, x)});
  const SolveResult sr = solve_widths(kTech, net, {x}, 0.3 * tau_star, {{100.0}, 0.0, 0.0});
  CHECK(!sr.ok());

  CHECK_THROWS_AS(solve_widths(kTech, net, {}, 1e-9, {{}, 0.0, 0.0}), validation_error);
  CHECK_THROWS_AS(solve_widths(kTech, net, {x}, 1e-9, {{100.0, 50.0}, 0.0, 0.0}),
                  validation_error);
  CHECK_THROWS_AS(solve_widths(kTech, net, {x}, 1e-9, {{-5.0}, 0.0, 0.0}), validation_error);
}

TEST_CASE("dtau_dx matches one-sided finite differences") {
  std::mt19937_64 rng(29);
  const double h = 0.01;
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Net net = testsup::random_net(rng);
    const double length = total_length(net);
    const RepeaterSolution sol = testsup::random_solution(net, rng, 5, 40.0, 350.0);
    if (sol.repeaters.empty()) continue;
    std::vector<Position> xs;
    std::vector<double> ws;
    for (const Repeater& r : sol.repeaters) {
      xs.push_back(r.x);
      ws.push_back(r.width);
    }
    const double base = delay_at(net, xs, ws);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double next = (i + 1 == xs.size()) ? length : xs[i + 1];
      const double prev = (i == 0) ? 0.0 : xs[i - 1];
      if (xs[i] + h < next && !in_forbidden(net, xs[i] + h)) {
        std::vector<Position> moved = xs;
        moved[i] += h;
        const double fd = (delay_at(net, moved, ws) - base) / h;
        CHECK(close_rel(dtau_dx(kTech, net, xs, ws, i, Side::right), fd, 1e-4, 1e-17));
        ++checked;
      }
      if (xs[i] - h > prev && !in_forbidden(net, xs[i] - h)) {
        std::vector<Position> moved = xs;
        moved[i] -= h;
        const double fd = (base - delay_at(net, moved, ws)) / h;
        CHECK(close_rel(dtau_dx(kTech, net, xs, ws, i, Side::left), fd, 1e-4, 1e-17));
        ++checked;
      }
    }
  }
  CHECK(checked > 80);
}

TEST_CASE("dtau_dx is two-valued exactly at a layer change") {
  Net net;
  net.segments.push_back({3000.0, 0.075, 2.0e-16});
  net.segments.push_back({3000.0, 0.045, 2.5e-16});
  net.driver_width = 100.0;
  net.receiver_width = 100.0;

  const std::vector<Position> xs{3000.0};  // exactly on the boundary
  const std::vector<double> ws{140.0};
  const double left = dtau_dx(kTech, net, xs, ws, 0, Side::left);
  const double right = dtau_dx(kTech, net, xs, ws, 0, Side::right);
  CHECK(left != right);

  const double h = 0.01;
  const double base = delay_at(net, xs, ws);
  const double fd_right = (delay_at(net, {3000.0 + h}, ws) - base) / h;
  const double fd_left = (base - delay_at(net, {3000.0 - h}, ws)) / h;
  CHECK(close_rel(right, fd_right, 1e-4, 1e-17));
  CHECK(close_rel(left, fd_left, 1e-4, 1e-17));
}

TEST_CASE("refine reduces width monotonically and stays legal") {
  const Net net = testsup::two_layer_net();
  RepeaterSolution seed;
  seed.repeaters = {{600.0, 200.0}, {1200.0, 200.0}, {1800.0, 200.0}};  // clustered, poor
  const double tau_t = 1.15 * total_delay(kTech, net, seed);

  const RefineResult rr = refine(kTech, net, seed, tau_t, {});
  REQUIRE(rr.converged);
  CHECK(rr.solution.delay == doctest::Approx(tau_t).epsilon(1e-9));
  CHECK(rr.iterations >= 1);

  REQUIRE(!rr.trace.accepted_widths.empty());
  for (std::size_t k = 1; k < rr.trace.accepted_widths.size(); ++k)
    CHECK(rr.trace.accepted_widths[k] <= rr.trace.accepted_widths[k - 1] * (1.0 + 1e-12));
  // the clustered seed must actually improve
  CHECK(rr.trace.accepted_widths.back() < rr.trace.accepted_widths.front() * 0.999);
  CHECK(rr.trace.moves_applied >= 1);

  for (const auto& xs : rr.trace.positions_log) {
    double prev = 0.0;
    for (double x : xs) {
      CHECK(x > prev);
      CHECK(x < total_length(net));
      CHECK(!in_forbidden(net, x));
      prev = x;
    }
  }
  CHECK(rr.solution.total_width == doctest::Approx(rr.trace.accepted_widths.back()).epsilon(1e-12));
}

TEST_CASE("refine is deterministic") {
  const Net net = testsup::two_layer_net();
  RepeaterSolution seed;
  seed.repeaters = {{1000.0, 160.0}, {3000.0, 160.0}, {6000.0, 160.0}};
  const double tau_t = 1.1 * total_delay(kTech, net, seed);

  const RefineResult a = refine(kTech, net, seed, tau_t, {});
  const RefineResult b = refine(kTech, net, seed, tau_t, {});
  REQUIRE(a.solution.repeaters.size() == b.solution.repeaters.size());
  for (std::size_t i = 0; i < a.solution.repeaters.size(); ++i) {
    CHECK(a.solution.repeaters[i].x == b.solution.repeaters[i].x);
    CHECK(a.solution.repeaters[i].width == b.solution.repeaters[i].width);
  }
  CHECK(a.solution.delay == b.solution.delay);
}

TEST_CASE("refine passes an empty placement through") {
  const Net net = testsup::flat_net(2000.0, 0.075, 2e-16);
  const RefineResult rr = refine(kTech, net, {}, 1e-9, {});
  CHECK(rr.converged);
  CHECK(rr.solution.repeaters.empty());
  CHECK(rr.solution.delay == doctest::Approx(total_delay(kTech, net, {})).epsilon(1e-12));
}

TEST_CASE("refine flags an unreachable target and returns the seed") {
  const Net net = testsup::flat_net(8000.0, 0.075, 2e-16);
  RepeaterSolution seed;
  seed.repeaters = {{4000.0, 100.0}};
  const double tau_star = total_delay(
      kTech, net, RepeaterSolution{{{4000.0, stationary_width(net, 4000.0)}}, 0.0, 0.0});

  const RefineResult rr = refine(kTech, net, seed, 0.3 * tau_star, {});
  CHECK(!rr.converged);
  REQUIRE(rr.solution.repeaters.size() == 1);
  CHECK(rr.solution.repeaters[0].x == 4000.0);
  CHECK(rr.solution.repeaters[0].width == 100.0);
}

TEST_CASE("refine rejects bad parameters") {
  const Net net = testsup::flat_net(2000.0, 0.075, 2e-16);
  RefineParams bad;
  bad.step = 0.0;
  CHECK_THROWS_AS(refine(kTech, net, {}, 1e-9, bad), validation_error);
  bad = {};
  bad.max_iters = 0;
  CHECK_THROWS_AS(refine(kTech, net, {}, 1e-9, bad), validation_error);
}
