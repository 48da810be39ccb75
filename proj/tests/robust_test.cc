#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/planar_solvers.h"
#include "affpose/robust.h"
#include "affpose/synthetic.h"
#include "test_util.h"

namespace affpose {
namespace {

SyntheticInstance Contaminated(std::uint64_t seed, int ground, int planes,
                               double pixel_sigma, double outliers,
                               std::vector<bool>* mask = nullptr,
                               MotionRegime regime = MotionRegime::kPlanar) {
  std::mt19937_64 rng(seed);
  SceneConfig scene;
  scene.num_ground_points = ground;
  scene.num_random_planes = planes;
  MotionSpec motion;
  motion.regime = regime;
  NoiseConfig noise;
  noise.pixel_sigma = pixel_sigma;
  SyntheticInstance inst = GenerateInstance(scene, motion, noise, rng);
  const auto m = InjectOutliers(inst, scene, outliers, rng);
  if (mask) *mask = m;
  return inst;
}

double PoseErrorDeg(const SyntheticInstance& inst, const Model& model) {
  const RelativePose p = ModelPose(model);
  return std::max(RotationErrorDeg(inst.pose.R, p.R),
                  TranslationErrorDeg(inst.pose.t, p.t));
}

double AngleDiffDeg(double a, double b) {
  return RadToDeg(std::abs(CanonicalAngle(a - b)));
}

template <typename F>
void ExpectError(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(SolverIds, NamesRoundTrip) {
  for (SolverId id : AllSolvers()) EXPECT_EQ(ParseSolverId(SolverName(id)), id);
  EXPECT_FALSE(ParseSolverId("five-point"));
  EXPECT_EQ(AllSolvers().size(), 4u);
}

TEST(Residual, GroundTruthIsZero) {
  const auto inst = testing::MakeInstance(1);
  for (const auto& ac : inst.acs) {
    EXPECT_LT(ResidualPixels(Model(*inst.planar), ac, inst.intrinsics), 1e-8);
    EXPECT_LT(ResidualPixels(Model(inst.pose), ac, inst.intrinsics,
                             ResidualKind::kSymmetricEpipolar),
              1e-8);
  }
}

TEST(Residual, ThreePixelDisplacement) {
  const auto inst = testing::MakeInstance(2, MotionRegime::kRandom);
  const Eigen::Matrix3d K = inst.intrinsics.K();
  const Eigen::Matrix3d F = K.inverse().transpose() *
                            EssentialFromPose(inst.pose.R, inst.pose.t) * K.inverse();
  for (const auto& ac : inst.acs) {
    const Eigen::Vector3d x_i = K * ac.p_i.Homogeneous();
    const Eigen::Vector3d x_j = K * ac.p_j.Homogeneous();
    // Move the pair 3 px along the normal of the epipolar variety: x_j across
    // its epipolar line and x_i across its own.
    const Eigen::Vector3d l_j = F * x_i, l_i = F.transpose() * x_j;
    Eigen::Vector4d d(l_j.x(), l_j.y(), l_i.x(), l_i.y());
    d = 3.0 * d.normalized();
    const Eigen::Vector3d y_i = x_i + Eigen::Vector3d(d[2], d[3], 0.0);
    const Eigen::Vector3d y_j = x_j + Eigen::Vector3d(d[0], d[1], 0.0);
    EXPECT_NEAR(SampsonDistance(F, y_i, y_j), 3.0, 0.3);
  }
}

TEST(Residual, SampsonBelowSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> px(0.0, 640.0);
  for (int k = 0; k < 200; ++k) {
    const auto inst = testing::MakeInstance(100 + k, MotionRegime::kRandom);
    const Eigen::Matrix3d K = inst.intrinsics.K();
    const Eigen::Matrix3d F = K.inverse().transpose() *
                              EssentialFromPose(inst.pose.R, inst.pose.t) * K.inverse();
    const Eigen::Vector3d x_i(px(rng), px(rng) * 0.75, 1.0);
    const Eigen::Vector3d x_j(px(rng), px(rng) * 0.75, 1.0);
    EXPECT_LE(SampsonDistance(F, x_i, x_j), SymmetricEpipolarDistance(F, x_i, x_j));
  }
}

TEST(Ransac, NoiseFreeInliersOnly) {
  for (SolverId solver : AllSolvers()) {
    const MotionRegime regime =
        solver == SolverId::kVertical ? MotionRegime::kRandom : MotionRegime::kPlanar;
    const auto inst = Contaminated(4, 50, 50, 0.0, 0.0, nullptr, regime);
    const RansacResult r = Ransac(solver, inst.acs, RansacConfig{}, inst.MakePriors());
    EXPECT_EQ(r.score, 100) << SolverName(solver);
    EXPECT_LT(PoseErrorDeg(inst, r.model), 1e-5) << SolverName(solver);
  }
}

TEST(Ransac, NoiseFreeWithOutliers) {
  for (SolverId solver : AllSolvers()) {
    const MotionRegime regime =
        solver == SolverId::kVertical ? MotionRegime::kRandom : MotionRegime::kPlanar;
    std::vector<bool> mask;
    const auto inst = Contaminated(5, 50, 50, 0.0, 0.4, &mask, regime);
    RansacConfig config;
    config.seed = 17;
    const RansacResult r = Ransac(solver, inst.acs, config, inst.MakePriors());
    EXPECT_GE(r.score, 60) << SolverName(solver);
    EXPECT_LT(PoseErrorDeg(inst, r.model), 0.1) << SolverName(solver);
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (!mask[k]) {
        EXPECT_TRUE(r.inliers[k]);
      }
    }
  }
}

TEST(Ransac, ResultInvariants) {
  const auto inst = Contaminated(6, 50, 50, 1.0, 0.3);
  for (auto kind : {ResidualKind::kSampson, ResidualKind::kSymmetricEpipolar}) {
    RansacConfig config;
    config.residual = kind;
    const RansacResult r =
        Ransac(SolverId::kPlanarClosedForm, inst.acs, config, inst.MakePriors());
    int count = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < inst.acs.size(); ++k) {
      EXPECT_EQ(r.inliers[k], r.residuals[k] <= config.threshold);
      EXPECT_NEAR(r.residuals[k],
                  ResidualPixels(r.model, inst.acs[k], inst.intrinsics, kind),
                  1e-9 * (1.0 + r.residuals[k]));
      if (r.inliers[k]) {
        ++count;
        sum += r.residuals[k];
      }
    }
    EXPECT_EQ(r.score, count);
    EXPECT_NEAR(r.mean_inlier_residual, sum / count, 1e-12);
  }
}

TEST(Ransac, MatchesReferenceSelection) {
  // Maximum inlier count, then lowest mean inlier residual, then earliest.
  const auto inst = Contaminated(7, 50, 50, 1.0, 0.4);
  RansacConfig config;
  config.seed = 99;
  const Priors priors = inst.MakePriors();
  int best_score = -1, best_iter = -1;
  double best_mean = 0.0;
  for (int iter = 0; iter < config.iterations; ++iter) {
    const auto& ac = inst.acs[RansacSample(config.seed, iter, inst.acs.size())];
    std::vector<Model> hyps;
    try {
      hyps = SolveHypotheses(SolverId::kPlanarClosedForm, ac, priors);
    } catch (const Error&) {
      continue;
    }
    for (const Model& m : hyps) {
      int score = 0;
      double sum = 0.0;
      for (const auto& other : inst.acs) {
        const double r = ResidualPixels(m, other, priors.intrinsics);
        if (r <= config.threshold) {
          ++score;
          sum += r;
        }
      }
      const double mean = score ? sum / score : 0.0;
      if (score > best_score || (score == best_score && mean < best_mean)) {
        best_score = score;
        best_mean = mean;
        best_iter = iter;
      }
    }
  }
  const RansacResult r = Ransac(SolverId::kPlanarClosedForm, inst.acs, config, priors);
  EXPECT_EQ(r.score, best_score);
  EXPECT_EQ(r.best_iteration, best_iter);
  EXPECT_NEAR(r.mean_inlier_residual, best_mean, 1e-12);
}

TEST(Ransac, SingleIterationReturnsPlantedSample) {
  auto inst = Contaminated(8, 50, 50, 2.0, 0.5);
  const auto truth = testing::MakeInstance(8);
  RansacConfig config;
  config.seed = 5;
  config.iterations = 1;
  // Plant a perfect correspondence where the first iteration samples.
  const std::size_t planted = RansacSample(config.seed, 0, inst.acs.size());
  const auto exact = Contaminated(8, 50, 50, 0.0, 0.0);
  inst.acs[planted] = exact.acs[planted];
  const RansacResult r =
      Ransac(SolverId::kPlanarClosedForm, inst.acs, config, inst.MakePriors());
  EXPECT_EQ(r.best_iteration, 0);
  const PlanarMotion m = std::get<PlanarMotion>(r.model);
  const PlanarMotion expected =
      SolvePlanarClosedForm(BuildPlanarSystem(exact.acs[planted]));
  EXPECT_NEAR(m.theta, expected.theta, 1e-12);
  EXPECT_LT(std::min(AngleDiffDeg(m.phi, expected.phi),
                     AngleDiffDeg(m.phi, expected.Flipped().phi)),
            1e-9);
  (void)truth;
}

TEST(Ransac, Deterministic) {
  const auto inst = Contaminated(9, 50, 50, 1.0, 0.3);
  RansacConfig config;
  config.seed = 1234;
  for (SolverId solver : AllSolvers()) {
    const RansacResult a = Ransac(solver, inst.acs, config, inst.MakePriors());
    const RansacResult b = Ransac(solver, inst.acs, config, inst.MakePriors());
    EXPECT_EQ(a.inliers, b.inliers);
    EXPECT_EQ(a.residuals, b.residuals);
    EXPECT_EQ(a.best_iteration, b.best_iteration);
    EXPECT_EQ(ModelPose(a.model).R, ModelPose(b.model).R);
    EXPECT_EQ(ModelPose(a.model).t, ModelPose(b.model).t);
  }
}

TEST(Ransac, DuplicateInlierDoesNotLowerScore) {
  for (int seed = 0; seed < 5; ++seed) {
    std::vector<bool> mask;
    auto inst = Contaminated(10 + seed, 50, 50, 0.0, 0.4, &mask);
    const RansacResult before =
        Ransac(SolverId::kPlanarClosedForm, inst.acs, RansacConfig{}, inst.MakePriors());
    std::size_t inlier = 0;
    while (mask[inlier]) ++inlier;
    inst.acs.push_back(inst.acs[inlier]);
    const RansacResult after =
        Ransac(SolverId::kPlanarClosedForm, inst.acs, RansacConfig{}, inst.MakePriors());
    EXPECT_GE(after.score, before.score);
  }
}

TEST(Ransac, Errors) {
  const auto inst = testing::MakeInstance(11);
  const Priors priors = inst.MakePriors();
  ExpectError(ErrorCode::kEmptyInput, [&] {
    Ransac(SolverId::kPlanarClosedForm, {}, RansacConfig{}, priors);
  });
  ExpectError(ErrorCode::kInvalidArgument, [&] {
    Ransac(SolverId::kVertical, inst.acs, RansacConfig{}, Priors{inst.intrinsics, {}, {}});
  });
  RansacConfig bad;
  bad.threshold = 0.0;
  ExpectError(ErrorCode::kInvalidArgument,
              [&] { Ransac(SolverId::kPlanarClosedForm, inst.acs, bad, priors); });
  const std::vector<AffineCorrespondence> degenerate(
      5, MakeCorrespondence(0, 0, 0, 0, Eigen::Matrix2d::Zero()));
  ExpectError(ErrorCode::kAllIterationsFailed, [&] {
    Ransac(SolverId::kPlanarClosedForm, degenerate, RansacConfig{}, priors);
  });
}

TEST(Voting, IdenticalCorrespondences) {
  const auto inst = testing::MakeInstance(12);
  const std::vector<AffineCorrespondence> same(20, inst.acs[3]);
  const VotingResult v = HistogramVoting(same, VotingConfig{});
  EXPECT_EQ(v.peak_count, 20);
  PlanarMotion m = SolvePlanarClosedForm(BuildPlanarSystem(inst.acs[3]));
  if (CheiralityMargin(PlanarMotionToPose(m), inst.acs[3].p_i.Homogeneous(),
                       inst.acs[3].p_j.Homogeneous()) < 0.0) {
    m = m.Flipped();
  }
  EXPECT_NEAR(v.motion.theta, m.theta, 1e-12);
  EXPECT_NEAR(v.motion.phi, m.phi, 1e-12);
}

TEST(Voting, NoiseFreeWithHalfOutliers) {
  for (int seed = 0; seed < 5; ++seed) {
    std::vector<bool> mask;
    const auto inst = Contaminated(13 + seed, 100, 100, 0.0, 0.5, &mask);
    // Inliers on the horizon carry no planar constraint and cast no vote.
    int voters = 0;
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (mask[k]) continue;
      try {
        SolvePlanarClosedForm(BuildPlanarSystem(inst.acs[k]));
        ++voters;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
      }
    }
    EXPECT_GE(voters, 99);
    for (double width : {1.0, 2.0, 0.5}) {
      VotingConfig config;
      config.bin_width_deg = width;
      const VotingResult v = HistogramVoting(inst.acs, config);
      EXPECT_LE(AngleDiffDeg(v.motion.theta, inst.planar->theta), width);
      EXPECT_LE(AngleDiffDeg(v.motion.phi, inst.planar->phi), width);
      EXPECT_GE(v.peak_count, voters);
    }
  }
}

TEST(Voting, AgreesWithRansacNoiseFree) {
  const auto inst = Contaminated(19, 50, 50, 0.0, 0.0);
  const VotingResult v = HistogramVoting(inst.acs, VotingConfig{});
  const RansacResult r =
      Ransac(SolverId::kPlanarClosedForm, inst.acs, RansacConfig{}, inst.MakePriors());
  const PlanarMotion m = std::get<PlanarMotion>(r.model);
  EXPECT_LE(AngleDiffDeg(v.motion.theta, m.theta), 1.0);
  EXPECT_LE(AngleDiffDeg(v.motion.phi, m.phi), 1.0);
}

TEST(Voting, CloseToRansacUnderPixelNoise) {
  const auto inst = Contaminated(20, 50, 50, 1.0, 0.0);
  const VotingResult v = HistogramVoting(inst.acs, VotingConfig{});
  const RansacResult r =
      Ransac(SolverId::kPlanarClosedForm, inst.acs, RansacConfig{}, inst.MakePriors());
  const PlanarMotion m = std::get<PlanarMotion>(r.model);
  EXPECT_LE(AngleDiffDeg(v.motion.theta, m.theta), 0.5);
  EXPECT_LE(AngleDiffDeg(v.motion.phi, m.phi), 0.5);
}

TEST(Voting, Errors) {
  ExpectError(ErrorCode::kEmptyInput, [] { HistogramVoting({}, VotingConfig{}); });
  const auto inst = testing::MakeInstance(21);
  VotingConfig config;
  config.bin_width_deg = 7.0;
  ExpectError(ErrorCode::kInvalidArgument, [&] { HistogramVoting(inst.acs, config); });
}

}  // namespace
}  // namespace affpose
