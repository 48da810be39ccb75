#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/synthetic.h"
#include "affpose/vertical_solver.h"
#include "oracles.h"
#include "test_util.h"

namespace affpose {
namespace {

constexpr double kPi = std::numbers::pi;

// Noise-free correspondence of the point X on the plane n^T X = d under
// X_j = R X + t, in normalized coordinates.
AffineCorrespondence PoseAc(const Eigen::Matrix3d& R, const Eigen::Vector3d& t,
                            const Eigen::Vector3d& X, const Eigen::Vector3d& n) {
  const Eigen::Matrix3d H = R + t * n.transpose() / n.dot(X);
  const Eigen::Vector2d p_i = X.hnormalized();
  const Eigen::Vector2d p_j = (R * X + t).hnormalized();
  return MakeCorrespondence(p_i.x(), p_i.y(), p_j.x(), p_j.y(),
                            AffineFromHomography(H, p_i));
}

// Simplified essential of the aligned views for a ground-truth instance.
Vector6d AlignedTruth(const SyntheticInstance& inst) {
  const Eigen::Matrix3d E = EssentialFromPose(inst.pose.R, inst.pose.t);
  const Eigen::Matrix3d E_tilde = inst.measured_gravity_j.R_imu() * E *
                                  inst.measured_gravity_i.R_imu().transpose();
  return SimplifiedEssential::FromMatrix(E_tilde, 1e-9).e;
}

double YawOf(const Eigen::Matrix3d& R_y) { return std::atan2(R_y(2, 0), R_y(0, 0)); }

TEST(AlignedSystem, SubstitutedZeros) {
  const AlignedSystem s =
      BuildAlignedSystem(MakeCorrespondence(0, 0, 0, 0, Eigen::Matrix2d::Identity()),
                         GravityAlignment(), GravityAlignment());
  Vector6d expected;
  expected << 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(Vector6d(s.M.row(2).transpose()), expected);
}

TEST(AlignedSystem, GroundTruthInKernel) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = testing::MakeInstance(seed, MotionRegime::kRandom);
    const Vector6d e = AlignedTruth(inst);
    for (const auto& ac : inst.acs) {
      const AlignedSystem s =
          BuildAlignedSystem(ac, inst.measured_gravity_i, inst.measured_gravity_j);
      EXPECT_LT((s.M * e).norm(), 1e-8 * e.norm());
      EXPECT_EQ(s.A_tilde.row(2).norm(), 0.0);
    }
  }
}

TEST(AlignedSystem, MatchesEvaluationOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const auto ac = MakeCorrespondence(
        u(rng), u(rng), u(rng), u(rng),
        (Eigen::Matrix2d() << u(rng), u(rng), u(rng), u(rng)).finished());
    const GravityAlignment g_i(u(rng), u(rng)), g_j(u(rng), u(rng));
    const AlignedSystem s = BuildAlignedSystem(ac, g_i, g_j);
    EXPECT_LT((s.M - oracle::AlignedSystemByEvaluation(ac, g_i, g_j)).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LT((s.aligned_i - AlignPoint(ac.p_i, g_i)).norm(), 1e-15);
  }
}

TEST(NullspaceBasis, CoordinateKernel) {
  Eigen::Matrix<double, 3, 6> M = Eigen::Matrix<double, 3, 6>::Zero();
  M.leftCols<3>().setIdentity();
  const NullspaceParam b = NullspaceBasis(M);
  for (const Vector6d* m : {&b.m1, &b.m2, &b.m3}) {
    EXPECT_LT(m->head<3>().norm(), 1e-15);
    EXPECT_NEAR(m->norm(), 1.0, 1e-15);
  }
}

TEST(NullspaceBasis, RankDeficientIsDegenerate) {
  Eigen::Matrix<double, 3, 6> M = Eigen::Matrix<double, 3, 6>::Zero();
  M(0, 0) = 1.0;
  M(1, 1) = 1.0;
  try {
    NullspaceBasis(M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(NullspaceBasis, OrthonormalKernelContainingTruth) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = testing::MakeInstance(40 + seed, MotionRegime::kRandom);
    const auto& ac = inst.acs[seed];
    const AlignedSystem s =
        BuildAlignedSystem(ac, inst.measured_gravity_i, inst.measured_gravity_j);
    const NullspaceParam b = NullspaceBasis(s.M);
    Eigen::Matrix<double, 6, 3> B;
    B << b.m1, b.m2, b.m3;
    EXPECT_LT((B.transpose() * B - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    EXPECT_LT((s.M * B).cwiseAbs().maxCoeff(), 1e-10);
    const Vector6d e = AlignedTruth(inst).normalized();
    EXPECT_LT((e - B * (B.transpose() * e)).norm(), 1e-8);
    EXPECT_LT((s.M * b.Assemble(0.3, -1.7)).norm(), 1e-10);
  }
}

TEST(ConstraintMatrix, MatchesEvaluation) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = testing::MakeInstance(60 + seed, MotionRegime::kRandom, 1.0);
    const AlignedSystem s = BuildAlignedSystem(inst.acs[seed], inst.measured_gravity_i,
                                               inst.measured_gravity_j);
    const NullspaceParam b = NullspaceBasis(s.M);
    const ConstraintSystem cs = BuildConstraintMatrix(b);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      const double beta = u(rng), gamma = u(rng);
      EXPECT_LT((cs.Evaluate(beta, gamma) - oracle::ConstraintsByEvaluation(b, beta, gamma))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-9);
    }
  }
}

TEST(ConstraintMatrix, ValidThirdVectorIsRootAtOrigin) {
  NullspaceParam b;
  b.m3 = SimplifiedEssential::FromYawTranslation(0.3, Eigen::Vector3d(0.2, 0.5, -0.8)).e;
  b.m1 << 1, 0, 0, 0, 0, 0;
  b.m2 << 0, 0, 0, 0, 1, 0;
  EXPECT_LT(BuildConstraintMatrix(b).Evaluate(0.0, 0.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ConstraintMatrix, RankSixOnGeneratorInstances) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::MakeInstance(80 + seed, MotionRegime::kRandom);
    const AlignedSystem s = BuildAlignedSystem(inst.acs[seed % inst.acs.size()],
                                               inst.measured_gravity_i,
                                               inst.measured_gravity_j);
    const ConstraintSystem cs = BuildConstraintMatrix(NullspaceBasis(s.M));
    const Eigen::VectorXd sv =
        Eigen::JacobiSVD<Eigen::Matrix<double, 7, kNumMonomials>>(cs.M1).singularValues();
    EXPECT_GT(sv[5], 1e-8 * sv[0]);
    EXPECT_LT(sv[6], 1e-8 * sv[0]);
  }
}

TEST(SolveBetaGamma, ReconstructsTruth) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::MakeInstance(140 + seed, MotionRegime::kRandom);
    const AlignedSystem s = BuildAlignedSystem(inst.acs[seed % inst.acs.size()],
                                               inst.measured_gravity_i,
                                               inst.measured_gravity_j);
    const NullspaceParam b = NullspaceBasis(s.M);
    const ConstraintSystem cs = BuildConstraintMatrix(b);
    const BetaGammaResult r = SolveBetaGamma(cs);
    ASSERT_FALSE(r.roots.empty());
    EXPECT_LE(r.roots.size(), 4u);
    const Vector6d truth = AlignedTruth(inst).normalized();
    double best = 1e9;
    for (const auto& root : r.roots) {
      const Vector6d e = b.Assemble(root.beta, root.gamma);
      const double scale = std::pow(e.squaredNorm(), 1.5);
      EXPECT_LT(cs.Evaluate(root.beta, root.gamma).cwiseAbs().maxCoeff(), 1e-6 * scale);
      const Vector6d n = e.normalized();
      best = std::min(best, std::min((n - truth).norm(), (n + truth).norm()));
      const Eigen::Matrix3d E = SimplifiedEssential{e}.Matrix();
      EXPECT_LT(DeterminantResidual(E), 1e-8);
      EXPECT_LT(TraceConstraintResidual(E), 1e-8);
    }
    EXPECT_LT(best, 1e-6);
  }
}

TEST(SolveBetaGamma, QuarticIdentity) {
  const auto inst = testing::MakeInstance(7, MotionRegime::kRandom, 0.5);
  const AlignedSystem s = BuildAlignedSystem(inst.acs[0], inst.measured_gravity_i,
                                             inst.measured_gravity_j);
  const BetaGammaResult r = SolveBetaGamma(BuildConstraintMatrix(NullspaceBasis(s.M)));
  const auto& q = r.quartic;
  EXPECT_EQ(q.qc[0], q.qb[0]);
  for (int k = 1; k < 4; ++k) EXPECT_EQ(q.qc[k], q.qb[k] - q.qa[k - 1]);
  EXPECT_EQ(q.qc[4], -q.qa[3]);
  EXPECT_GE(r.dropped_row, 0);
  EXPECT_LT(r.dropped_row, 7);
}

TEST(SolveBetaGamma, PlantedRoot) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double beta0 = n(rng), gamma0 = n(rng);
    const Eigen::Vector3d t = testing::RandomUnit(rng);
    NullspaceParam b;
    for (int i = 0; i < 6; ++i) {
      b.m1[i] = n(rng);
      b.m2[i] = n(rng);
    }
    const Vector6d e = SimplifiedEssential::FromYawTranslation(n(rng), t).e;
    b.m3 = e - beta0 * b.m1 - gamma0 * b.m2;
    const BetaGammaResult r = SolveBetaGamma(BuildConstraintMatrix(b));
    double best = 1e9;
    for (const auto& root : r.roots) {
      best = std::min(best, std::hypot(root.beta - beta0, root.gamma - gamma0));
    }
    EXPECT_LT(best, 1e-8) << "planted (" << beta0 << ", " << gamma0 << ")";
  }
}

TEST(SolveBetaGamma, ZeroSystemIsRankDeficient) {
  try {
    SolveBetaGamma(ConstraintSystem{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
}

TEST(DecomposeSimplified, ForwardTranslation) {
  const auto c = DecomposeSimplified(
      SimplifiedEssential::FromYawTranslation(0.0, Eigen::Vector3d::UnitZ()));
  ASSERT_FALSE(c.empty());
  bool found = false;
  for (const auto& yt : c) {
    found = found || (std::abs(yt.theta) < 1e-12 &&
                      (yt.t_tilde - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
  }
  EXPECT_TRUE(found);
}

TEST(DecomposeSimplified, RoundTripAndSign) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 200; ++k) {
    const double theta = angle(rng);
    const Eigen::Vector3d t = testing::RandomUnit(rng);
    const SimplifiedEssential E = SimplifiedEssential::FromYawTranslation(theta, t);
    const auto c = DecomposeSimplified(E);
    ASSERT_FALSE(c.empty());
    EXPECT_LE(c.size(), 2u);
    bool found = false;
    for (const auto& yt : c) {
      const Eigen::Matrix3d back =
          SimplifiedEssential::FromYawTranslation(yt.theta, yt.t_tilde).Matrix();
      EXPECT_LT((back - E.Matrix()).norm(), 1e-9);
      found = found || (std::abs(CanonicalAngle(yt.theta - theta)) < 1e-9 &&
                        (yt.t_tilde - t).norm() < 1e-9);
    }
    EXPECT_TRUE(found);

    SimplifiedEssential negated = E;
    negated.e = -E.e;
    const auto d = DecomposeSimplified(negated);
    ASSERT_EQ(d.size(), c.size());
    for (const auto& yt : c) {
      bool twin = false;
      for (const auto& other : d) {
        twin = twin || (std::abs(CanonicalAngle(other.theta - yt.theta)) < 1e-9 &&
                        (other.t_tilde + yt.t_tilde).norm() < 1e-9);
      }
      EXPECT_TRUE(twin);
    }
  }
}

TEST(DecomposeSimplified, InconsistentPattern) {
  SimplifiedEssential E;
  E.e << 1.0, 0.0, 0.0, 5.0, 0.0, 0.0;
  try {
    DecomposeSimplified(E);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentPattern);
  }
}

TEST(SolveVertical, RecoversRandomMotion) {
  for (int seed = 0; seed < 100; ++seed) {
    const auto inst = testing::MakeInstance(600 + seed, MotionRegime::kRandom);
    const auto& ac = inst.acs[seed % inst.acs.size()];
    const VerticalSolveResult r =
        SolveVertical(ac, inst.measured_gravity_i, inst.measured_gravity_j);
    ASSERT_FALSE(r.candidates.empty());
    double best = 1e9;
    for (std::size_t k = 0; k < r.candidates.size(); ++k) {
      const auto& c = r.candidates[k];
      EXPECT_GT(c.cheirality_margin, 0.0);
      if (k > 0) {
        EXPECT_LE(c.cheirality_margin, r.candidates[k - 1].cheirality_margin);
      }
      EXPECT_LT(DeterminantResidual(c.essential.Matrix()), 1e-8);
      EXPECT_LT(TraceConstraintResidual(c.essential.Matrix()), 1e-8);
      best = std::min(best, std::max(RotationErrorDeg(inst.pose.R, c.pose.R),
                                     TranslationErrorDeg(inst.pose.t, c.pose.t)));
    }
    EXPECT_LT(best, 1e-5) << "seed " << seed;
  }
}

TEST(SolveVertical, ZeroMotionIsDegenerate) {
  const auto ac = MakeCorrespondence(0.1, -0.05, 0.1, -0.05, Eigen::Matrix2d::Identity());
  try {
    SolveVertical(ac, GravityAlignment(0.05, 0.02), GravityAlignment(0.05, 0.02));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateMotion);
  }
}

TEST(SolveVertical, ExtraYawShiftsTheta) {
  const GravityAlignment g_i(0.08, -0.05), g_j(-0.03, 0.06);
  const double theta = 0.2, delta = DegToRad(30.0);
  const Eigen::Vector3d t_tilde = Eigen::Vector3d(0.3, -0.1, 0.9).normalized();
  const Eigen::Vector3d X(0.5, 1.0, 12.0);
  const Eigen::Vector3d n = Eigen::Vector3d(0.3, 0.8, -0.5).normalized();

  auto solve = [&](double yaw, const Eigen::Vector3d& t_aligned) {
    const Eigen::Matrix3d R =
        g_j.R_imu().transpose() * RotationY(yaw) * g_i.R_imu();
    const Eigen::Vector3d t = g_j.R_imu().transpose() * t_aligned;
    const auto r = SolveVertical(PoseAc(R, t, X, n), g_i, g_j);
    // Candidate closest to the generating motion, in aligned terms.
    double best = 1e9;
    std::pair<double, Eigen::Vector3d> out;
    for (const auto& c : r.candidates) {
      const Eigen::Matrix3d R_y = g_j.R_imu() * c.pose.R * g_i.R_imu().transpose();
      const Eigen::Vector3d t_y = g_j.R_imu() * c.pose.t;
      const double e = std::abs(CanonicalAngle(YawOf(R_y) - yaw)) + (t_y - t_aligned).norm();
      if (e < best) {
        best = e;
        out = {YawOf(R_y), t_y};
      }
    }
    return out;
  };
  const auto [theta0, t0] = solve(theta, t_tilde);
  const auto [theta1, t1] = solve(theta + delta, RotationY(delta) * t_tilde);
  EXPECT_NEAR(CanonicalAngle(theta1 - theta0), delta, 1e-8);
  EXPECT_LT((t1 - RotationY(delta) * t0).norm(), 1e-8);
}

}  // namespace
}  // namespace affpose
