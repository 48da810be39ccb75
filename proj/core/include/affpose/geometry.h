#ifndef AFFPOSE_GEOMETRY_H_
#define AFFPOSE_GEOMETRY_H_

#include <optional>

#include <Eigen/Core>

#include "affpose/types.h"

namespace affpose {

// Wraps an angle to (-pi, pi].
double CanonicalAngle(double angle);

double RadToDeg(double rad);
double DegToRad(double deg);

Eigen::Matrix3d CrossProductMatrix(const Eigen::Vector3d& v);

// Rotation about the camera Y axis with the sign convention
// [[c, 0, -s], [0, 1, 0], [s, 0, c]].
Eigen::Matrix3d RotationY(double theta);
// [[1, 0, 0], [0, c, s], [0, -s, c]]
Eigen::Matrix3d RotationX(double angle);
// [[c, s, 0], [-s, c, 0], [0, 0, 1]]
Eigen::Matrix3d RotationZ(double angle);

// [t]_x R. Throws DegenerateMotion when t is zero.
Eigen::Matrix3d EssentialFromPose(const Eigen::Matrix3d& R,
                                  const Eigen::Vector3d& t);

// Planar-motion essential matrix with unit baseline:
//   [[0, cos(theta-phi), 0], [-cos(phi), 0, sin(phi)], [0, sin(theta-phi), 0]]
Eigen::Matrix3d PlanarEssential(double theta, double phi);

// R = R_y(theta), t = -R_y * (sin phi, 0, cos phi). The unobservable scale
// rho is dropped.
RelativePose PlanarMotionToPose(const PlanarMotion& motion);

// p_j^T E p_i. Both points must be in the normalized frame.
double EpipolarResidual(const Eigen::Matrix3d& E, const ImagePoint& p_i,
                        const ImagePoint& p_j);

// First two components of E^T p_j + A_hat^T E p_i; zero iff the affine part
// of the correspondence is consistent with E.
Eigen::Vector2d AffineConstraintResidual(const Eigen::Matrix3d& E,
                                         const AffineCorrespondence& ac);

// R_imu * [u, v, 1]^T; the third component is not renormalized.
Eigen::Vector3d AlignPoint(const ImagePoint& p, const GravityAlignment& g);

// Pose between the original views from the yaw rotation and translation
// between the aligned views.
RelativePose RecoverOriginalPose(const Eigen::Matrix3d& R_y,
                                 const Eigen::Vector3d& t_tilde,
                                 const GravityAlignment& g_i,
                                 const GravityAlignment& g_j);

double RotationErrorDeg(const Eigen::Matrix3d& R_gt, const Eigen::Matrix3d& R);

enum class TranslationSign { kAware, kIgnore };

// Angle between the two directions in degrees. With kIgnore the result is
// min(angle, 180 - angle). Throws DegenerateMotion on a zero vector.
double TranslationErrorDeg(const Eigen::Vector3d& t_gt,
                           const Eigen::Vector3d& t,
                           TranslationSign sign = TranslationSign::kAware);

// |det E| after scaling E to unit Frobenius norm.
double DeterminantResidual(const Eigen::Matrix3d& E);
// ||2 E E^T E - trace(E E^T) E||_F after scaling E to unit Frobenius norm.
double TraceConstraintResidual(const Eigen::Matrix3d& E);

// Linear two-view triangulation of the ray pair under X_j = R X_i + t.
// Returns the depths (d_i, d_j) or nullopt when the rays are parallel.
std::optional<Eigen::Vector2d> TriangulateDepths(const RelativePose& pose,
                                                 const Eigen::Vector3d& ray_i,
                                                 const Eigen::Vector3d& ray_j);

// min(d_i, d_j) of the triangulated point; negative when the point is behind
// either camera, -infinity when triangulation fails.
double CheiralityMargin(const RelativePose& pose, const Eigen::Vector3d& ray_i,
                        const Eigen::Vector3d& ray_j);

}  // namespace affpose

#endif  // AFFPOSE_GEOMETRY_H_
