#ifndef AFFPOSE_TOOLS_COMMANDS_H_
#define AFFPOSE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "affpose/robust.h"
#include "affpose/synthetic.h"

namespace affpose::cli {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitMismatch = 2 };

// Worker count: hardware concurrency, capped by AFFPOSE_THREADS when set.
// Throws InvalidArgument for a malformed value.
int WorkerCount();

struct SolveOptions {
  std::string input;
  SolverId solver = SolverId::kPlanarClosedForm;
  Estimator estimator = Estimator::kRansac;
  RansacConfig ransac;
  VotingConfig voting;
  std::string out;  // empty: stdout
};

int RunSolve(const SolveOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
  SweepSpec spec;
  std::string out;      // table; empty: stdout
  std::string records;  // per-trial records; empty: not written
};

int RunSweepCommand(const SweepOptions& options, std::ostream& out,
                    std::ostream& err);

struct OracleOptions {
  SolverId solver = SolverId::kPlanarLeastSquares;
  int instances = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int RunOracleCheck(const OracleOptions& options, std::ostream& out,
                   std::ostream& err);

int RunSelftest(std::ostream& out, std::ostream& err);

struct GenerateOptions {
  MotionRegime regime = MotionRegime::kPlanar;
  std::uint64_t seed = 0;
  double pixel_sigma = 0.0;
  int count = 1;  // correspondences written, <= 0 for all
  double outlier_fraction = 0.0;
  bool pixel_frame = false;
  std::string out;
};

int RunGenerate(const GenerateOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace affpose::cli

#endif  // AFFPOSE_TOOLS_COMMANDS_H_
