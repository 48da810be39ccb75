#ifndef AFFPOSE_SYNTHETIC_H_
#define AFFPOSE_SYNTHETIC_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "affpose/robust.h"
#include "affpose/types.h"

namespace affpose {

struct SceneConfig {
  int num_ground_points = 50;
  int num_random_planes = 50;
  double x_min = -5.0, x_max = 5.0;
  double y_min = -5.0, y_max = 5.0;
  double z_min = 10.0, z_max = 20.0;
  // Distance of the ground plane from the first camera along gravity.
  double ground_height = 3.0;
  double baseline = 2.0;  // meters
  int width = 640;
  int height = 480;
  Intrinsics intrinsics;  // f = 400, principal point (320, 240)
  // Random planes whose normal makes |cos| below sqrt(1 - c^2) with the
  // viewing ray of either camera are redrawn.
  double max_plane_ray_cos = 0.99;
  // Side of the square on the plane, centered at each point, whose corners
  // are the four auxiliary points defining the local homography.
  double patch_size = 1.0;
  // Add pixel noise to the auxiliary points as well as the matched point.
  bool noise_aux_points = true;
  int max_retries = 1000;
};

enum class MotionRegime { kPlanar, kForward, kSideways, kRandom };

std::string_view MotionRegimeName(MotionRegime regime);
std::optional<MotionRegime> ParseMotionRegime(std::string_view name);

struct MotionSpec {
  MotionRegime regime = MotionRegime::kPlanar;
  // Planar regimes: yaw drawn uniformly from [-max_yaw, max_yaw].
  double max_yaw_deg = 10.0;
  // kRandom: each of the three Euler angles drawn from [-max_tilt, max_tilt],
  // translation direction uniform on the sphere, and the first view gets
  // pitch and roll drawn from [-max_pitch_roll, max_pitch_roll].
  double max_tilt_deg = 10.0;
  double max_pitch_roll_deg = 10.0;
};

struct NoiseConfig {
  double pixel_sigma = 0.0;         // px, per coordinate
  double nonplanar_sigma_deg = 0.0; // X rotation, Z rotation, YZ translation
  double pitch_sigma_deg = 0.0;     // IMU noise on both views
  double roll_sigma_deg = 0.0;
};

struct SyntheticInstance {
  RelativePose pose;            // ground truth, unit translation
  double translation_norm = 0.0;
  // Exact alignments of both views and the noisy ones handed to solvers.
  GravityAlignment gravity_i, gravity_j;
  GravityAlignment measured_gravity_i, measured_gravity_j;
  // Planar ground truth when the motion is planar (no non-planar noise).
  std::optional<PlanarMotion> planar;
  Intrinsics intrinsics;
  // Normalized-frame correspondences (noise added in pixels first).
  std::vector<AffineCorrespondence> acs;
  // Noise-free 3-D points in the first camera frame, one per correspondence.
  std::vector<Eigen::Vector3d> points;

  Priors MakePriors() const;
};

SyntheticInstance GenerateInstance(const SceneConfig& scene,
                                   const MotionSpec& motion,
                                   const NoiseConfig& noise, std::mt19937_64& rng);

// Replaces round(fraction * n) randomly chosen correspondences with point
// pairs drawn uniformly over the image and an affine map with entries drawn
// uniformly from [-2, 2]. Returns the outlier mask.
std::vector<bool> InjectOutliers(SyntheticInstance& instance,
                                 const SceneConfig& scene, double fraction,
                                 std::mt19937_64& rng);

// Normalized 4-point DLT; src and dst hold 4 or more pixel points.
Eigen::Matrix3d HomographyDlt(std::span<const Eigen::Vector2d> src,
                              std::span<const Eigen::Vector2d> dst);

// Jacobian of x -> dehomogenize(H x) at p. Throws PointAtInfinity when p is
// mapped to infinity.
Eigen::Matrix2d AffineFromHomography(const Eigen::Matrix3d& H,
                                     const Eigen::Vector2d& p);

// Centered pixel coordinates for the unknown-focal solver.
AffineCorrespondence ToCenteredPixels(const AffineCorrespondence& ac,
                                      const Intrinsics& intrinsics);

struct TrialRecord {
  int level_index = 0;
  double level = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  SolverId solver = SolverId::kPlanarClosedForm;
  RelativePose truth;
  RelativePose estimate;
  double focal = 0.0;  // unknown-focal estimate, 0 otherwise
  double eps_R_deg = 0.0;
  double eps_t_deg = 0.0;
  bool failed = false;
  std::string failure;
};

struct QuintileRmse {
  double eps_R = 0.0;
  double eps_t = 0.0;
  int kept = 0;
};

// RMSE over the lowest 40% of each error (at least one record), with the
// rotation and translation errors sorted independently. Failed records are
// skipped. Throws EmptyInput when nothing remains.
QuintileRmse ComputeQuintileRmse(std::span<const TrialRecord> records);

enum class NoiseAxis { kImage, kNonplanar, kPitch, kRoll };

std::string_view NoiseAxisName(NoiseAxis axis);
std::optional<NoiseAxis> ParseNoiseAxis(std::string_view name);

enum class Estimator { kRansac, kVoting };

std::string_view EstimatorName(Estimator estimator);
std::optional<Estimator> ParseEstimator(std::string_view name);

struct SweepSpec {
  std::vector<SolverId> solvers = {SolverId::kPlanarClosedForm};
  MotionSpec motion;
  SceneConfig scene;
  NoiseAxis axis = NoiseAxis::kImage;
  std::vector<double> levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  // Image noise used when the swept axis is not the image one.
  double fixed_pixel_sigma = 1.0;
  int trials = 1000;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::kRansac;
  RansacConfig ransac;
  VotingConfig voting;
  int threads = 1;
};

struct SweepRow {
  double level = 0.0;
  SolverId solver = SolverId::kPlanarClosedForm;
  int n_trials = 0;
  int n_failed = 0;
  double eps_R_rmse_deg = 0.0;
  double eps_t_rmse_deg = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> records;  // level-major, then solver, then trial
};

NoiseConfig NoiseForLevel(const SweepSpec& spec, double level);

// One trial; its random stream depends only on (spec.seed, level index,
// trial index), so every solver sees the same instance.
TrialRecord RunTrial(const SweepSpec& spec, int level_index, int trial,
                     SolverId solver);

SweepResult RunSweep(const SweepSpec& spec);

void WriteSweepTable(std::ostream& out, const SweepSpec& spec,
                     const SweepResult& result);
void WriteTrialRecords(std::ostream& out, const SweepSpec& spec,
                       const SweepResult& result);

}  // namespace affpose

#endif  // AFFPOSE_SYNTHETIC_H_
