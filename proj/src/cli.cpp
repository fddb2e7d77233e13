#include "rip/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rip/bench.hpp"
#include "rip/errors.hpp"
#include "rip/io.hpp"
#include "rip/pipeline.hpp"

namespace rip {

namespace {

struct GenArgs {
  std::uint64_t seed = 1;
  int count = 1;
  std::string out_dir;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  const TechParams tech = default_tech();
  const GenParams params;
  std::filesystem::create_directories(a.out_dir);
  for (int k = 0; k < a.count; ++k) {
    std::mt19937_64 rng(a.seed + static_cast<std::uint64_t>(k));
    const Net net = gen_net(params, tech, rng);
    char name[32];
    std::snprintf(name, sizeof name, "net%02d.json", k);
    save_net((std::filesystem::path(a.out_dir) / name).string(), tech, net);
  }
  out << "wrote " << a.count << " net(s) to " << a.out_dir << "\n";
  return 0;
}

struct SolveArgs {
  std::string net_path;
  double tau_t = 0.0;
  double ratio = 0.0;
  std::string strategy = "rip";
  std::string out_path;
};

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  auto [tech, net] = load_net(a.net_path);
  if ((a.tau_t > 0.0) == (a.ratio > 0.0))
    throw validation_error("exactly one of --tau-t and --ratio is required");
  double tau_t = a.tau_t;
  if (a.ratio > 0.0) {
    const MinDelayResult ref = compute_tau_min(tech, net);
    tau_t = a.ratio * ref.tau_min;
    err << "reference minimum delay " << ref.tau_min << " s, target " << tau_t << " s\n";
  }

  const Strategy strategy = parse_strategy(a.strategy);
  const auto t0 = std::chrono::steady_clock::now();
  bool feasible = false;
  RepeaterSolution sol;
  std::vector<StageRecord> stages;
  if (strategy.kind == Strategy::Kind::rip) {
    RipOutcome oc = rip(tech, net, tau_t);
    feasible = oc.feasible;
    sol = oc.solution;
    stages = std::move(oc.stages);
  } else {
    RunResult rr = run_strategy(tech, net, tau_t, strategy);
    feasible = rr.feasible;
    sol = rr.solution;
    StageRecord rec;
    rec.stage = strategy.text;
    rec.feasible = feasible;
    rec.delay = sol.delay;
    rec.total_width = sol.total_width;
    rec.runtime_s = rr.runtime_s;
    stages.push_back(std::move(rec));
  }
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!feasible) sol = RepeaterSolution{};
  if (a.out_path.empty()) {
    out << solution_to_json(tech, sol, feasible, stages, runtime).dump(2) << "\n";
  } else {
    save_solution(a.out_path, tech, sol, feasible, stages, runtime);
    out << (feasible ? "feasible" : "infeasible") << ", wrote " << a.out_path << "\n";
  }
  return feasible ? 0 : 1;
}

struct SweepArgs {
  SweepOptions opts;
  std::string out_path;
};

int run_sweep(const SweepArgs& a, std::ostream& out) {
  CsvContent csv = sweep(a.opts);
  save_csv(a.out_path, csv.comments, csv.rows);
  out << "wrote " << csv.rows.size() << " row(s) to " << a.out_path << "\n";
  return 0;
}

struct CompareArgs {
  std::string csv_path;
  std::string reference = "rip";
};

int run_compare(const CompareArgs& a, std::ostream& out) {
  const CsvContent csv = load_csv(a.csv_path);
  out << format_report(compare(csv, a.reference));
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"minimum-power repeater insertion for long two-pin interconnects"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate random benchmark nets");
  gen->add_option("--seed", gen_args.seed, "base RNG seed; net k uses seed+k");
  gen->add_option("--count", gen_args.count, "number of nets")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve one net for one delay target");
  solve->add_option("--net", solve_args.net_path, "net json file")->required();
  solve->add_option("--tau-t", solve_args.tau_t, "delay target in seconds");
  solve->add_option("--ratio", solve_args.ratio,
                    "delay target as a multiple of the reference minimum delay");
  solve->add_option("--strategy", solve_args.strategy,
                    "rip | dp:MIN:MAX:STEP[:LOC] | dplib:SIZE:GRAN[:MIN[:LOC]]");
  solve->add_option("--out", solve_args.out_path, "write the solution json here");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run strategies over random nets and targets");
  sweep_cmd->add_option("--out", sweep_args.out_path, "output csv file")->required();
  sweep_cmd->add_option("--seed", sweep_args.opts.seed, "base RNG seed; net k uses seed+k");
  sweep_cmd->add_option("--nets", sweep_args.opts.net_count, "number of nets")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--targets", sweep_args.opts.targets, "delay targets per net")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--ratio-min", sweep_args.opts.ratio_min, "smallest delay ratio");
  sweep_cmd->add_option("--ratio-max", sweep_args.opts.ratio_max, "largest delay ratio");
  sweep_cmd
      ->add_option("--strategy", sweep_args.opts.strategies,
                   "strategy to run (repeatable); default rip")
      ->take_all();

  CompareArgs compare_args;
  CLI::App* compare_cmd = app.add_subcommand("compare", "summarize a sweep csv");
  compare_cmd->add_option("--csv", compare_args.csv_path, "sweep csv file")->required();
  compare_cmd->add_option("--reference", compare_args.reference,
                          "strategy the others are compared against");

  try {
    std::vector<const char*> argv;
    argv.push_back("rip");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args, out);
    if (solve->parsed()) return run_solve(solve_args, out, err);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args, out);
    if (compare_cmd->parsed()) return run_compare(compare_args, out);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_limit_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace rip
