#ifndef AFFPOSE_ROBUST_H_
#define AFFPOSE_ROBUST_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "affpose/planar_solvers.h"
#include "affpose/types.h"

namespace affpose {

enum class SolverId {
  kPlanarClosedForm,
  kPlanarLeastSquares,
  kPlanarUnknownFocal,
  kVertical,
};

// "planar-cf", "planar-ls", "planar-unknown-f", "vertical-1ac".
std::string_view SolverName(SolverId id);
std::optional<SolverId> ParseSolverId(std::string_view name);
std::span<const SolverId> AllSolvers();

enum class ResidualKind { kSampson, kSymmetricEpipolar };

std::string_view ResidualKindName(ResidualKind kind);
std::optional<ResidualKind> ParseResidualKind(std::string_view name);

struct RansacConfig {
  double threshold = 2.0;  // pixels
  int iterations = 100;
  std::uint64_t seed = 0;
  ResidualKind residual = ResidualKind::kSampson;
};

using Model = std::variant<PlanarMotion, FocalSolution, RelativePose>;

RelativePose ModelPose(const Model& model);

// Side information the solvers need. Correspondences are always given in the
// normalized frame; the intrinsics map them to pixels for scoring (and to
// centered pixels for the unknown-focal solver).
struct Priors {
  Intrinsics intrinsics;
  std::optional<GravityAlignment> gravity_i;
  std::optional<GravityAlignment> gravity_j;
};

// All model hypotheses the solver produces from one correspondence. The
// least-squares solver contributes its global minimum only. Throws the
// solver's error, or InvalidArgument when a required prior is missing.
std::vector<Model> SolveHypotheses(SolverId solver,
                                   const AffineCorrespondence& ac,
                                   const Priors& priors);

// Pixel-space distance of the point pair to the model's epipolar geometry.
// For a FocalSolution the estimated focal replaces priors.intrinsics.focal.
double ResidualPixels(const Model& model, const AffineCorrespondence& ac,
                      const Intrinsics& intrinsics,
                      ResidualKind kind = ResidualKind::kSampson);

double SampsonDistance(const Eigen::Matrix3d& F, const Eigen::Vector3d& x_i,
                       const Eigen::Vector3d& x_j);
double SymmetricEpipolarDistance(const Eigen::Matrix3d& F,
                                 const Eigen::Vector3d& x_i,
                                 const Eigen::Vector3d& x_j);

struct RansacResult {
  Model model;
  std::vector<bool> inliers;
  // Residual of every correspondence under the returned model, pixels.
  std::vector<double> residuals;
  int score = 0;
  double mean_inlier_residual = 0.0;
  int best_iteration = -1;
  int failed_iterations = 0;
};

// Index of the correspondence sampled at the given iteration.
std::size_t RansacSample(std::uint64_t seed, int iteration, std::size_t n);

// One correspondence per iteration, drawn from a stream derived from
// (seed, iteration). The winner maximizes the inlier count, then minimizes
// the mean inlier residual, then has the lowest iteration index. Planar
// translation signs are fixed afterwards by a cheirality vote over the
// inliers.
RansacResult Ransac(SolverId solver, std::span<const AffineCorrespondence> acs,
                    const RansacConfig& config, const Priors& priors);

enum class VotingRefinement { kNone, kMeanOfPeakBin };

struct VotingConfig {
  double bin_width_deg = 1.0;
  VotingRefinement refinement = VotingRefinement::kMeanOfPeakBin;
};

struct VotingResult {
  PlanarMotion motion;
  int peak_count = 0;
  int num_votes = 0;
};

// Closed-form solution of every correspondence, with its translation sign
// chosen by its own cheirality, voted into a joint (theta, phi) histogram.
VotingResult HistogramVoting(std::span<const AffineCorrespondence> acs,
                             const VotingConfig& config);

// Random-stream helpers shared with the synthetic benchmark.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a,
                         std::uint64_t b = 0);

}  // namespace affpose

#endif  // AFFPOSE_ROBUST_H_
