#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affpose/error.h"
#include "commands.h"

namespace {

using namespace affpose;
using namespace affpose::cli;

template <typename Enum, typename Parse>
CLI::Validator EnumValidator(Parse parse, const std::string& what) {
  return CLI::Validator(
      [parse, what](std::string& value) -> std::string {
        return parse(value) ? std::string() : "unknown " + what + " '" + value + "'";
      },
      what);
}

SolverId ToSolver(const std::string& name) { return *ParseSolverId(name); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative pose from affine correspondences"};
  app.require_subcommand(1);
  const auto solver_check = EnumValidator<SolverId>(ParseSolverId, "solver");

  // solve
  SolveOptions solve;
  std::string solve_solver = "planar-cf";
  std::string solve_estimator = "ransac";
  std::string solve_residual = "sampson";
  auto* solve_cmd = app.add_subcommand("solve", "Solve from an AC file");
  solve_cmd->add_option("--input,input", solve.input, "AC file")->required();
  solve_cmd->add_option("--solver", solve_solver, "planar-cf | planar-ls | planar-unknown-f | vertical-1ac")
      ->check(solver_check)
      ->capture_default_str();
  solve_cmd->add_option("--estimator", solve_estimator, "ransac | voting")
      ->check(EnumValidator<Estimator>(ParseEstimator, "estimator"))
      ->capture_default_str();
  solve_cmd->add_option("--threshold", solve.ransac.threshold, "RANSAC threshold, px")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--iterations", solve.ransac.iterations, "RANSAC iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--residual", solve_residual, "sampson | symmetric-epipolar")
      ->check(EnumValidator<ResidualKind>(ParseResidualKind, "residual"))
      ->capture_default_str();
  solve_cmd->add_option("--bin-width", solve.voting.bin_width_deg, "voting bin width, deg")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve.ransac.seed, "RANSAC seed")->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "report file (default stdout)");

  // sweep
  SweepOptions sweep;
  std::vector<std::string> sweep_solvers = {"planar-cf"};
  std::string sweep_axis = "image";
  std::string sweep_regime = "planar";
  std::string sweep_estimator = "ransac";
  auto* sweep_cmd = app.add_subcommand("sweep", "Synthetic noise sweep");
  sweep_cmd->add_option("--solver", sweep_solvers, "solver ids, comma separated, or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--noise-axis", sweep_axis, "image | nonplanar | pitch | roll")
      ->check(EnumValidator<NoiseAxis>(ParseNoiseAxis, "noise axis"))
      ->capture_default_str();
  sweep_cmd->add_option("--levels", sweep.spec.levels, "noise levels, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.spec.trials, "trials per level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.spec.seed, "base seed")->capture_default_str();
  sweep_cmd->add_option("--regime", sweep_regime, "planar | forward | sideways | random")
      ->check(EnumValidator<MotionRegime>(ParseMotionRegime, "regime"))
      ->capture_default_str();
  sweep_cmd->add_option("--estimator", sweep_estimator, "ransac | voting")
      ->check(EnumValidator<Estimator>(ParseEstimator, "estimator"))
      ->capture_default_str();
  sweep_cmd->add_option("--threshold", sweep.spec.ransac.threshold, "RANSAC threshold, px")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--iterations", sweep.spec.ransac.iterations, "RANSAC iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--bin-width", sweep.spec.voting.bin_width_deg, "voting bin width, deg")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--pixel-sigma", sweep.spec.fixed_pixel_sigma,
                        "image noise when sweeping another axis, px")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "table file (default stdout)");
  sweep_cmd->add_option("--records", sweep.records, "per-trial records file");

  // oracle-check
  OracleOptions oracle;
  std::string oracle_solver = "planar-ls";
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Cross-check a solver against its oracle");
  oracle_cmd->add_option("--solver", oracle_solver, "solver id")
      ->check(solver_check)
      ->capture_default_str();
  oracle_cmd->add_option("--instances,--trials", oracle.instances, "random instances")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "seed")->capture_default_str();
  oracle_cmd->add_option("--out", oracle.out, "report file (default stdout)");

  auto* selftest_cmd = app.add_subcommand("selftest", "Quick exactness and oracle checks");

  // generate
  GenerateOptions generate;
  std::string generate_regime = "planar";
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic AC file");
  generate_cmd->add_option("--regime", generate_regime, "planar | forward | sideways | random")
      ->check(EnumValidator<MotionRegime>(ParseMotionRegime, "regime"))
      ->capture_default_str();
  generate_cmd->add_option("--seed", generate.seed, "seed")->capture_default_str();
  generate_cmd->add_option("--pixel-sigma", generate.pixel_sigma, "image noise, px")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  generate_cmd->add_option("--count", generate.count, "correspondences, 0 for all")
      ->capture_default_str();
  generate_cmd->add_option("--outliers", generate.outlier_fraction, "outlier fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate_cmd->add_flag("--pixel", generate.pixel_frame, "write pixel coordinates");
  generate_cmd->add_option("--out", generate.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) {
      solve.solver = ToSolver(solve_solver);
      solve.estimator = *ParseEstimator(solve_estimator);
      solve.ransac.residual = *ParseResidualKind(solve_residual);
      return RunSolve(solve, std::cout, std::cerr);
    }
    if (*sweep_cmd) {
      sweep.spec.solvers.clear();
      for (const auto& name : sweep_solvers) {
        if (name == "all") {
          sweep.spec.solvers.assign(AllSolvers().begin(), AllSolvers().end());
          break;
        }
        const auto id = ParseSolverId(name);
        if (!id) {
          std::cerr << "error: unknown solver '" << name << "'\n";
          return kExitUsage;
        }
        sweep.spec.solvers.push_back(*id);
      }
      sweep.spec.axis = *ParseNoiseAxis(sweep_axis);
      sweep.spec.motion.regime = *ParseMotionRegime(sweep_regime);
      sweep.spec.estimator = *ParseEstimator(sweep_estimator);
      sweep.spec.threads = WorkerCount();
      return RunSweepCommand(sweep, std::cout, std::cerr);
    }
    if (*oracle_cmd) {
      oracle.solver = ToSolver(oracle_solver);
      return RunOracleCheck(oracle, std::cout, std::cerr);
    }
    if (*selftest_cmd) return RunSelftest(std::cout, std::cerr);
    if (*generate_cmd) {
      generate.regime = *ParseMotionRegime(generate_regime);
      return RunGenerate(generate, std::cout, std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
