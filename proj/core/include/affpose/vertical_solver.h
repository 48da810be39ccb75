#ifndef AFFPOSE_VERTICAL_SOLVER_H_
#define AFFPOSE_VERTICAL_SOLVER_H_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "affpose/types.h"

namespace affpose {

// Linear constraints M e = 0 on the simplified essential matrix of the
// gravity-aligned views:
//   rows 0, 1: the two affine constraints
//   row 2:     the epipolar constraint
struct AlignedSystem {
  Eigen::Matrix<double, 3, 6> M = Eigen::Matrix<double, 3, 6>::Zero();
  // A_hat^T R_imu_j^T; the third row is zero.
  Eigen::Matrix3d A_tilde = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aligned_i = Eigen::Vector3d::Zero();
  Eigen::Vector3d aligned_j = Eigen::Vector3d::Zero();
};

AlignedSystem BuildAlignedSystem(const AffineCorrespondence& ac,
                                 const GravityAlignment& g_i,
                                 const GravityAlignment& g_j);

// e = beta * m1 + gamma * m2 + m3.
struct NullspaceParam {
  Vector6d m1 = Vector6d::Zero();
  Vector6d m2 = Vector6d::Zero();
  Vector6d m3 = Vector6d::Zero();

  Vector6d Assemble(double beta, double gamma) const {
    return beta * m1 + gamma * m2 + m3;
  }
};

// Right singular vectors spanning the kernel; m1 belongs to the smallest
// singular value. Throws DegenerateInput when rank(M) < 3.
NullspaceParam NullspaceBasis(const Eigen::Matrix<double, 3, 6>& M);

// Monomial order of the constraint polynomials.
enum Monomial {
  kB3 = 0, kB2G, kB2, kBG2, kBG, kB, kG3, kG2, kG, kOne, kNumMonomials
};

std::array<double, kNumMonomials> MonomialVector(double beta, double gamma);

// Row 0: det E; rows 1..6: the trace-constraint entries (0,0), (0,1), (0,2),
// (1,0), (1,2), (2,1). For the simplified pattern, entry (2,0) equals
// entry (0,2), entry (2,2) equals -entry (0,0), and entry (1,1) is dependent,
// so these six are the independent ones.
struct ConstraintSystem {
  Eigen::Matrix<double, 7, kNumMonomials> M1 =
      Eigen::Matrix<double, 7, kNumMonomials>::Zero();

  Eigen::Matrix<double, 7, 1> Evaluate(double beta, double gamma) const;
};

ConstraintSystem BuildConstraintMatrix(const NullspaceParam& basis);

// The two eliminated rows and the resulting quartic, coefficients highest
// degree first. Q_a reads beta*gamma + qa(gamma), Q_b reads beta + qb(gamma),
// and Q_c = gamma * qb - qa.
struct QuarticPolys {
  std::array<double, 4> qa{};
  std::array<double, 4> qb{};
  std::array<double, 5> qc{};
};

struct BetaGamma {
  double beta = 0.0;
  double gamma = 0.0;
};

struct BetaGammaResult {
  std::vector<BetaGamma> roots;  // at most 4
  QuarticPolys quartic;
  int dropped_row = -1;
};

// Throws RankDeficient when rank(M1) != 6 and NoRealSolution when no real
// root survives polishing.
BetaGammaResult SolveBetaGamma(const ConstraintSystem& cs);

struct YawTranslation {
  double theta = 0.0;
  Eigen::Vector3d t_tilde = Eigen::Vector3d::Zero();
};

// Yaw and aligned translation reproducing the simplified essential matrix
// (up to its scale). Throws InconsistentPattern when none does.
std::vector<YawTranslation> DecomposeSimplified(const SimplifiedEssential& E);

struct VerticalCandidate {
  RelativePose pose;
  SimplifiedEssential essential;
  double cheirality_margin = 0.0;
};

struct VerticalSolveResult {
  std::vector<VerticalCandidate> candidates;  // sorted by margin, descending
  int num_roots = 0;
};

// Full pipeline on one correspondence with known pitch and roll of both
// views. Throws EmptyResult when no candidate passes the cheirality test.
VerticalSolveResult SolveVertical(const AffineCorrespondence& ac,
                                  const GravityAlignment& g_i,
                                  const GravityAlignment& g_j);

// Same as SolveVertical but without the cheirality filter; the margin is still
// filled in. Used where candidates must be scored by something else.
VerticalSolveResult SolveVerticalAllCandidates(const AffineCorrespondence& ac,
                                               const GravityAlignment& g_i,
                                               const GravityAlignment& g_j);

}  // namespace affpose

#endif  // AFFPOSE_VERTICAL_SOLVER_H_
