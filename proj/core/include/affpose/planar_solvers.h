#ifndef AFFPOSE_PLANAR_SOLVERS_H_
#define AFFPOSE_PLANAR_SOLVERS_H_

#include <vector>

#include <Eigen/Core>

#include "affpose/types.h"

namespace affpose {

// Three linear equations C x = 0 in the trig vector
// x = (sin(theta-phi), cos(theta-phi), sin(phi), cos(phi)) contributed by one
// affine correspondence under planar motion:
//   row 0: epipolar constraint
//   row 1, row 2: the two affine constraints
struct PlanarSystem {
  Eigen::Matrix<double, 3, 4> C = Eigen::Matrix<double, 3, 4>::Zero();
};

PlanarSystem BuildPlanarSystem(const AffineCorrespondence& ac);

// Least-eigenvalue eigenvector of C^T C, ignoring the unit-circle constraints.
// The result is unconstrained and carries a single global scale.
TrigVector ClosedFormTrigVector(const PlanarSystem& system);

// theta/phi from the closed-form eigenvector. Either (theta, phi) or
// (theta, phi + pi) is returned depending on the eigenvector sign.
PlanarMotion SolvePlanarClosedForm(const PlanarSystem& system);

struct StationaryPoint {
  TrigVector x;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double objective = 0.0;
};

struct LeastSquaresSolution {
  // Canonical representatives (x4 >= 0, then x3 >= 0) of all real stationary
  // points, sorted by ascending objective.
  std::vector<StationaryPoint> points;
  // Index into points of the global minimum (always 0 after sorting).
  std::size_t best = 0;

  const StationaryPoint& minimum() const { return points[best]; }
  PlanarMotion motion() const { return minimum().x.ToMotion(); }
};

// All stationary points of sum_k (C_k x)^2 subject to
// x1^2 + x2^2 = 1 and x3^2 + x4^2 = 1.
LeastSquaresSolution SolvePlanarLeastSquares(const PlanarSystem& system);

// Residual of the Lagrange stationarity system: the four gradient rows
// (C^T C + diag(l1, l1, l2, l2)) x followed by the two circle constraints.
Eigen::Matrix<double, 6, 1> StationarityResiduals(const PlanarSystem& system,
                                                  const StationaryPoint& point);

struct FocalSolution {
  PlanarMotion motion;
  double focal = 0.0;      // pixels
  double inv_focal = 0.0;  // g = 1 / focal
  TrigVector x;
};

struct FocalSolveResult {
  // Real solutions with g > 0.
  std::vector<FocalSolution> solutions;
  // Number of nontrivial solutions of the polynomial system before the
  // realness and g > 0 filter.
  int num_candidates = 0;
};

// Planar motion plus focal length from one correspondence in centered pixel
// coordinates (principal point already subtracted).
FocalSolveResult SolvePlanarUnknownFocal(const AffineCorrespondence& ac);

// The five polynomial equations in (x1, x2, x3, x4, g) on centered pixel
// coordinates: the epipolar and two affine equations, then the two circle
// constraints.
Eigen::Matrix<double, 5, 1> FocalSystemResiduals(const AffineCorrespondence& ac,
                                                 const Eigen::Vector4d& x,
                                                 double g);

}  // namespace affpose

#endif  // AFFPOSE_PLANAR_SOLVERS_H_
