#ifndef AFFPOSE_TOOLS_ORACLES_H_
#define AFFPOSE_TOOLS_ORACLES_H_

#include <vector>

#include <Eigen/Core>

#include "affpose/planar_solvers.h"
#include "affpose/types.h"
#include "affpose/vertical_solver.h"

namespace affpose::oracle {

// Brute-force reference implementations, deliberately independent of the
// solver code paths. Slow; meant for cross-checks only.

struct GridMinimum {
  double objective = 0.0;
  double alpha = 0.0;  // theta - phi
  double phi = 0.0;
};

// Exhaustive minimum of ||C x||^2 over a uniform (theta - phi, phi) grid on
// (-pi, pi]^2 with the given step.
GridMinimum PlanarGridMinimum(const Eigen::Matrix<double, 3, 4>& C,
                              double step_deg);

// Minimizer of the Rayleigh quotient ||C x||^2 / ||x||^2 over
// x = (cos psi (sin a, cos a), sin psi (sin f, cos f)), found by a coarse
// (a, f, psi) grid and a local pattern search. Returns (theta, phi).
PlanarMotion PlanarRayleighMinimizer(const Eigen::Matrix<double, 3, 4>& C);

struct FocalRoot {
  double alpha = 0.0;
  double phi = 0.0;
  double g = 0.0;
};

// Real roots with g in [g_min, g_max] of the three equations of the
// unknown-focal system on the circles, found by Newton refinement from every
// local minimum of the residual norm on a dense (alpha, phi, log g) grid.
// One representative per sign twin (x -> -x), canonicalized like the solver.
std::vector<FocalRoot> FocalGridRoots(const AffineCorrespondence& centered,
                                      double g_min = 1.0 / 5000.0,
                                      double g_max = 1.0 / 50.0);

// Columns of the aligned linear system computed by evaluating the epipolar
// and affine residuals in the original frames on each basis matrix.
Eigen::Matrix<double, 3, 6> AlignedSystemByEvaluation(
    const AffineCorrespondence& ac, const GravityAlignment& g_i,
    const GravityAlignment& g_j);

// det E and the six used trace-constraint entries of E = beta m1 + gamma m2 +
// m3, evaluated directly on the 3x3 matrix.
Eigen::Matrix<double, 7, 1> ConstraintsByEvaluation(const NullspaceParam& basis,
                                                    double beta, double gamma);

// [t]_x R written out entry by entry.
Eigen::Matrix3d EssentialByExpansion(const Eigen::Matrix3d& R,
                                     const Eigen::Vector3d& t);

// Rotation angle of R_gt R^T from the unit quaternion, degrees.
double QuaternionRotationErrorDeg(const Eigen::Matrix3d& R_gt,
                                  const Eigen::Matrix3d& R);

}  // namespace affpose::oracle

#endif  // AFFPOSE_TOOLS_ORACLES_H_
