#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/planar_solvers.h"
#include "affpose/synthetic.h"
#include "oracles.h"
#include "test_util.h"

namespace affpose {
namespace {

constexpr double kPi = std::numbers::pi;

// Noise-free correspondence of the point X on the plane n^T X = d under the
// planar motion (theta, phi).
AffineCorrespondence PlanarAc(double theta, double phi, const Eigen::Vector3d& X,
                              const Eigen::Vector3d& n) {
  const Eigen::Matrix3d R = RotationY(theta);
  const Eigen::Vector3d t = -R * Eigen::Vector3d(std::sin(phi), 0.0, std::cos(phi));
  const Eigen::Matrix3d H = R + t * n.transpose() / n.dot(X);
  const Eigen::Vector2d p_i = X.hnormalized();
  const Eigen::Vector2d p_j = (R * X + t).hnormalized();
  return MakeCorrespondence(p_i.x(), p_i.y(), p_j.x(), p_j.y(),
                            AffineFromHomography(H, p_i));
}

double AngleDiffDeg(double a, double b) {
  return RadToDeg(std::abs(CanonicalAngle(a - b)));
}

// Smallest (theta, phi) error over the motion and its translation flip.
double PlanarErrorDeg(const PlanarMotion& truth, const PlanarMotion& m) {
  const PlanarMotion f = m.Flipped();
  return std::min(
      std::max(AngleDiffDeg(truth.theta, m.theta), AngleDiffDeg(truth.phi, m.phi)),
      std::max(AngleDiffDeg(truth.theta, f.theta), AngleDiffDeg(truth.phi, f.phi)));
}

const Eigen::Vector3d kPoint(0.7, 1.9, 12.0);
const Eigen::Vector3d kNormal = Eigen::Vector3d(0.2, 0.9, -0.3).normalized();

TEST(BuildPlanarSystem, SubstitutedZeros) {
  const PlanarSystem s =
      BuildPlanarSystem(MakeCorrespondence(0, 0, 0, 0, Eigen::Matrix2d::Identity()));
  Eigen::Matrix<double, 3, 4> expected;
  expected << 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0;
  EXPECT_EQ(s.C, expected);
}

TEST(BuildPlanarSystem, RowsFollowTheirDefinitions) {
  const AffineCorrespondence ac = MakeCorrespondence(
      0.1, -0.2, 0.3, 0.4, (Eigen::Matrix2d() << 1.1, 0.2, -0.3, 0.9).finished());
  const auto& A = ac.A;
  const double ui = 0.1, vi = -0.2, uj = 0.3, vj = 0.4;
  Eigen::Matrix<double, 3, 4> expected;
  expected << vi, vi * uj, vj, -ui * vj,
      0, A(0, 0) * vi, A(1, 0), -(A(1, 0) * ui + vj),
      1, A(0, 1) * vi + uj, A(1, 1), -A(1, 1) * ui;
  EXPECT_LT((BuildPlanarSystem(ac).C - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BuildPlanarSystem, GroundTruthInKernel) {
  const double theta = DegToRad(5.0), phi = DegToRad(3.0);
  const PlanarSystem s = BuildPlanarSystem(PlanarAc(theta, phi, kPoint, kNormal));
  const TrigVector x = TrigVector::FromMotion(PlanarMotion::Canonical(theta, phi));
  EXPECT_LT((s.C * x.x).norm(), 1e-8);
}

TEST(BuildPlanarSystem, ResidualGrowsContinuously) {
  const double theta = DegToRad(5.0), phi = DegToRad(3.0);
  const TrigVector x = TrigVector::FromMotion(PlanarMotion::Canonical(theta, phi));
  AffineCorrespondence ac = PlanarAc(theta, phi, kPoint, kNormal);
  double previous = 0.0;
  for (double eps : {1e-4, 2e-4, 4e-4, 8e-4}) {
    AffineCorrespondence moved = ac;
    moved.A(1, 0) += eps;
    moved.p_j.u += eps;
    const double r = (BuildPlanarSystem(moved).C * x.x).norm();
    EXPECT_GT(r, previous);
    if (previous > 0.0) {
      EXPECT_NEAR(r / previous, 2.0, 1e-6);
    }
    previous = r;
  }
}

TEST(BuildPlanarSystem, PixelFrameRejected) {
  const auto ac = MakeCorrespondence(1, 2, 3, 4, Eigen::Matrix2d::Identity(), Frame::kPixel);
  EXPECT_THROW(BuildPlanarSystem(ac), Error);
}

TEST(ClosedForm, RecoversKnownMotion) {
  const double theta = DegToRad(5.0), phi = DegToRad(3.0);
  const PlanarMotion m =
      SolvePlanarClosedForm(BuildPlanarSystem(PlanarAc(theta, phi, kPoint, kNormal)));
  EXPECT_LT(PlanarErrorDeg(PlanarMotion::Canonical(theta, phi), m), 1e-6);
}

TEST(ClosedForm, ForwardMotion) {
  const PlanarMotion m =
      SolvePlanarClosedForm(BuildPlanarSystem(PlanarAc(0.0, 0.0, kPoint, kNormal)));
  EXPECT_LT(PlanarErrorDeg(PlanarMotion{}, m), 1e-6);
}

TEST(ClosedForm, EigenvectorSignLeavesThetaInvariant) {
  const auto inst = testing::MakeInstance(21);
  for (const auto& ac : inst.acs) {
    const TrigVector x = ClosedFormTrigVector(BuildPlanarSystem(ac));
    TrigVector neg = x;
    neg.x = -x.x;
    EXPECT_FALSE(x.constrained);
    EXPECT_NEAR(x.ToMotion().theta, neg.ToMotion().theta, 1e-12);
    EXPECT_NEAR(std::abs(CanonicalAngle(x.ToMotion().phi - neg.ToMotion().phi)), kPi, 1e-12);
  }
}

TEST(ClosedForm, RankDeficientSystemIsDegenerate) {
  PlanarSystem s;
  s.C.row(0) << 1, 0, 0, 0;
  try {
    SolvePlanarClosedForm(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(ClosedForm, MatchesRayleighOracleUnderNoise) {
  for (int seed = 0; seed < 5; ++seed) {
    const auto inst = testing::MakeInstance(100 + seed, MotionRegime::kPlanar, 1.0);
    const PlanarSystem s = BuildPlanarSystem(inst.acs[seed]);
    const PlanarMotion m = SolvePlanarClosedForm(s);
    const PlanarMotion ref = oracle::PlanarRayleighMinimizer(s.C);
    EXPECT_LT(PlanarErrorDeg(ref, m), 1e-5);
  }
}

TEST(LeastSquares, NoiseFreeMinimum) {
  const double theta = DegToRad(5.0), phi = DegToRad(3.0);
  const auto sol =
      SolvePlanarLeastSquares(BuildPlanarSystem(PlanarAc(theta, phi, kPoint, kNormal)));
  EXPECT_LT(sol.minimum().objective, 1e-12);
  EXPECT_LT(PlanarErrorDeg(PlanarMotion::Canonical(theta, phi), sol.motion()), 1e-6);
}

TEST(LeastSquares, ZeroSystemIsDegenerate) {
  try {
    SolvePlanarLeastSquares(PlanarSystem{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(LeastSquares, StationaryPointsSatisfyKkt) {
  for (int seed = 0; seed < 40; ++seed) {
    const auto inst = testing::MakeInstance(200 + seed, MotionRegime::kPlanar, 1.0);
    const PlanarSystem s = BuildPlanarSystem(inst.acs[seed % inst.acs.size()]);
    const auto sol = SolvePlanarLeastSquares(s);
    ASSERT_FALSE(sol.points.empty());
    EXPECT_LE(sol.points.size(), 8u);
    EXPECT_EQ(sol.best, 0u);
    const double scale = std::max(1.0, (s.C.transpose() * s.C).norm());
    for (std::size_t k = 0; k < sol.points.size(); ++k) {
      const auto& p = sol.points[k];
      EXPECT_TRUE(p.x.SatisfiesUnitConstraints());
      EXPECT_LT(StationarityResiduals(s, p).cwiseAbs().maxCoeff(), 1e-6 * scale);
      EXPECT_GE(p.x.x[3], 0.0);
      EXPECT_NEAR(p.objective, (s.C * p.x.x).squaredNorm(), 1e-12 * scale);
      if (k > 0) {
        EXPECT_LE(sol.points[k - 1].objective, p.objective);
      }
    }
  }
}

TEST(LeastSquares, NotAboveGridMinimum) {
  for (int seed = 0; seed < 8; ++seed) {
    const auto inst = testing::MakeInstance(300 + seed, MotionRegime::kPlanar, 1.0);
    const PlanarSystem s = BuildPlanarSystem(inst.acs[seed]);
    const auto sol = SolvePlanarLeastSquares(s);
    const auto grid = oracle::PlanarGridMinimum(s.C, 0.05);
    EXPECT_LE(sol.minimum().objective, grid.objective + 1e-6);
  }
}

TEST(LeastSquares, ScaleInvariant) {
  const auto inst = testing::MakeInstance(31, MotionRegime::kPlanar, 1.0);
  PlanarSystem s = BuildPlanarSystem(inst.acs[4]);
  const PlanarMotion a = SolvePlanarLeastSquares(s).motion();
  const PlanarMotion c = SolvePlanarClosedForm(s);
  s.C *= -7.3;
  const PlanarMotion b = SolvePlanarLeastSquares(s).motion();
  EXPECT_NEAR(CanonicalAngle(a.theta - b.theta), 0.0, 1e-9);
  EXPECT_NEAR(CanonicalAngle(a.phi - b.phi), 0.0, 1e-9);
  const PlanarMotion d = SolvePlanarClosedForm(s);
  EXPECT_LT(PlanarErrorDeg(c, d), RadToDeg(1e-9));
}

TEST(UnknownFocal, RecoversFocalAndMotion) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::MakeInstance(400 + seed);
    const auto& ac = inst.acs[seed % inst.acs.size()];
    const auto result = SolvePlanarUnknownFocal(ToCenteredPixels(ac, inst.intrinsics));
    ASSERT_FALSE(result.solutions.empty());
    EXPECT_LE(result.num_candidates, 6);
    double best = 1e9, focal = 0.0;
    for (const auto& s : result.solutions) {
      EXPECT_GT(s.inv_focal, 0.0);
      EXPECT_EQ(s.inv_focal, 1.0 / s.focal);
      EXPECT_LT(FocalSystemResiduals(ToCenteredPixels(ac, inst.intrinsics), s.x.x,
                                     s.inv_focal)
                    .cwiseAbs()
                    .maxCoeff(),
                1e-6);
      // The trivial root (g = x1 = x3 = 0) never appears.
      EXPECT_FALSE(std::abs(s.x.x[0]) < 1e-12 && std::abs(s.x.x[2]) < 1e-12);
      const double e = PlanarErrorDeg(*inst.planar, s.motion);
      if (e < best) {
        best = e;
        focal = s.focal;
      }
    }
    EXPECT_LT(best, 1e-6);
    EXPECT_NEAR(focal, 400.0, 1e-3);
  }
}

TEST(UnknownFocal, RequiresPixelFrame) {
  const auto inst = testing::MakeInstance(41);
  try {
    SolvePlanarUnknownFocal(inst.acs[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFrameMismatch);
  }
}

TEST(UnknownFocal, HorizonPointIsDegenerate) {
  const auto ac = MakeCorrespondence(
      40.0, 0.0, 45.0, 0.0, (Eigen::Matrix2d() << 1.1, 0.1, 0.0, 1.05).finished(),
      Frame::kPixel);
  try {
    SolvePlanarUnknownFocal(ac);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput) << e.what();
  }
}

TEST(UnknownFocal, RootSetMatchesGridOracle) {
  for (int seed = 0; seed < 5; ++seed) {
    const auto inst = testing::MakeInstance(500 + seed);
    const auto centered = ToCenteredPixels(inst.acs[seed], inst.intrinsics);
    const auto roots = oracle::FocalGridRoots(centered);
    const auto result = SolvePlanarUnknownFocal(centered);
    // Solutions come in sign twins; the oracle keeps one per twin.
    ASSERT_EQ(result.solutions.size(), 2 * roots.size());
    for (const auto& r : roots) {
      bool found = false;
      for (const auto& s : result.solutions) {
        const double d_alpha = CanonicalAngle(std::atan2(s.x.x[0], s.x.x[1]) - r.alpha);
        const double d_phi = CanonicalAngle(std::atan2(s.x.x[2], s.x.x[3]) - r.phi);
        found = found || (std::abs(d_alpha) < 1e-8 && std::abs(d_phi) < 1e-8 &&
                          std::abs(s.inv_focal - r.g) < 1e-8 * r.g);
      }
      EXPECT_TRUE(found) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace affpose
