// Command-line front end: validate a configuration, run the solver and emit
// a CSV trace, reproduce the built-in example, or sweep the invariant
// suites.
//
// Exit codes:
//   validate:          0 valid, 1 validation failure, 2 parse error
//   run:               0 converged, 1 validation failure, 2 parse error,
//                      3 iteration cap, 4 stage error
//   reproduce-example: 0 ratios reproduced, 1 assertion failure
//   check-properties:  0 all suites pass, 1 failure

#include <chrono>
#include <optional>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bregsolve/bregsolve.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;
constexpr int kExitMaxIters = 3;
constexpr int kExitStageError = 4;

struct RunArtifact {
  std::string config_echo;
  bregsolve::RunResult result;
  double wall_seconds = 0.0;
};

int cmd_validate(const std::string& config) {
  std::optional<bregsolve::LoadedRun> lr;
  try {
    lr = bregsolve::load_run_config(config);
  } catch (const bregsolve::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  const auto outcome = bregsolve::validate_loaded(*lr);
  std::cout << outcome.text;
  return outcome.pass ? kExitOk : kExitValidation;
}

int cmd_run(const std::string& config, long max_iters_flag, double tol_flag,
            const std::string& anchor_flag, const std::string& trace_out) {
  std::optional<bregsolve::LoadedRun> maybe;
  try {
    maybe = bregsolve::load_run_config(config);
    if (max_iters_flag > 0) maybe->run.max_iters = max_iters_flag;
    if (tol_flag > 0.0) maybe->run.residual_tol = tol_flag;
    if (!anchor_flag.empty())
      maybe->run.anchor_u =
          bregsolve::detail::parse_vector("anchor", anchor_flag, maybe->problem.spec.dim);
  } catch (const bregsolve::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  bregsolve::LoadedRun& lr = *maybe;

  const auto outcome = bregsolve::validate_loaded(lr);
  if (!outcome.pass) {
    std::cerr << outcome.text;
    return kExitValidation;
  }

  RunArtifact artifact;
  artifact.config_echo = lr.echo;
  const auto t0 = std::chrono::steady_clock::now();
  artifact.result = bregsolve::run(lr.problem, lr.schedule, lr.run);
  artifact.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    std::ofstream os(trace_out, std::ios::binary);
    if (!os) {
      std::cerr << "cannot write trace to '" << trace_out << "'\n";
      return kExitStageError;
    }
    bregsolve::write_trace_csv(os, artifact.result.trace, lr.problem.spec.dim);
  }

  const auto& res = artifact.result;
  std::cout << "status: " << bregsolve::to_string(res.status) << "\n";
  std::cout << "iterations: " << res.iterations << "\n";
  std::cout << "solution:";
  for (double v : res.solution) std::cout << " " << bregsolve::detail::format_double(v);
  std::cout << "\n";
  if (!res.trace.empty())
    std::cout << "final residual: " << bregsolve::detail::format_double(res.trace.back().residual)
              << "\n";
  std::cout << "wall time: " << artifact.wall_seconds << " s\n";
  std::cout << "trace: " << trace_out << " (" << res.trace.size() << " rows)\n";

  switch (res.status) {
    case bregsolve::RunStatus::Converged:
      return kExitOk;
    case bregsolve::RunStatus::MaxIters:
      return kExitMaxIters;
    default:
      std::cerr << "stage error: " << res.error << "\n";
      return kExitStageError;
  }
}

int cmd_reproduce() {
  const auto rep = bregsolve::reproduce_example();
  std::cout << rep.text();
  return rep.pass ? kExitOk : kExitValidation;
}

int cmd_check_properties(unsigned long seed) {
  const auto results = bregsolve::run_all_properties(seed);
  std::cout << bregsolve::format_property_table(results);
  for (const auto& r : results)
    if (!r.pass()) return kExitValidation;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman-distance equilibrium/fixed-point solver"};
  app.require_subcommand(1);

  std::string config;
  long max_iters = 0;
  double tol = 0.0;
  std::string anchor;
  std::string trace_out = "trace.csv";
  unsigned long seed = 20260809ULL;

  auto* validate = app.add_subcommand("validate", "check a config or preset");
  validate->add_option("config", config, "config file path or preset name")->required();

  auto* run = app.add_subcommand("run", "run the solver and write a CSV trace");
  run->add_option("config", config, "config file path or preset name")->required();
  run->add_option("--max-iters", max_iters, "override the iteration cap");
  run->add_option("--tol", tol, "override the residual tolerance");
  run->add_option("--anchor", anchor, "override the anchor point (comma separated)");
  run->add_option("--trace-out", trace_out, "trace CSV path");

  auto* reproduce = app.add_subcommand("reproduce-example", "rerun the built-in example and check the prox ratios");
  (void)reproduce;

  auto* props = app.add_subcommand("check-properties", "run the randomized invariant suites");
  props->add_option("--seed", seed, "RNG seed for the sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config);
    if (run->parsed()) return cmd_run(config, max_iters, tol, anchor, trace_out);
    if (reproduce->parsed()) return cmd_reproduce();
    if (props->parsed()) return cmd_check_properties(seed);
  } catch (const bregsolve::StageError& e) {
    std::cerr << "stage error: " << e.what() << "\n";
    return kExitStageError;
  } catch (const bregsolve::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageError;
  }
  return kExitOk;
}
