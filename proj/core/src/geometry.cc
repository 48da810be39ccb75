#include "affpose/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "affpose/error.h"

namespace affpose {
namespace {

void RequireNormalized(const ImagePoint& p, const char* what) {
  if (p.frame != Frame::kNormalized) {
    throw Error(ErrorCode::kFrameMismatch,
                std::string(what) + " expects normalized coordinates");
  }
}

Eigen::Matrix3d UnitFrobenius(const Eigen::Matrix3d& E) {
  const double norm = E.norm();
  return norm > 0.0 ? Eigen::Matrix3d(E / norm) : E;
}

}  // namespace

double CanonicalAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped > std::numbers::pi) wrapped -= kTwoPi;
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

double RadToDeg(double rad) { return rad * 180.0 / std::numbers::pi; }
double DegToRad(double deg) { return deg * std::numbers::pi / 180.0; }

Eigen::Matrix3d CrossProductMatrix(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix3d RotationY(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d R;
  R << c, 0.0, -s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return R;
}

Eigen::Matrix3d RotationX(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d R;
  R << 1.0, 0.0, 0.0,
       0.0, c, s,
       0.0, -s, c;
  return R;
}

Eigen::Matrix3d RotationZ(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d R;
  R << c, s, 0.0,
       -s, c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

Eigen::Matrix3d EssentialFromPose(const Eigen::Matrix3d& R,
                                  const Eigen::Vector3d& t) {
  if (!(t.norm() > 0.0)) {
    throw Error(ErrorCode::kDegenerateMotion,
                "zero baseline has no essential matrix");
  }
  return CrossProductMatrix(t) * R;
}

Eigen::Matrix3d PlanarEssential(double theta, double phi) {
  const double alpha = theta - phi;
  Eigen::Matrix3d E;
  E << 0.0, std::cos(alpha), 0.0,
       -std::cos(phi), 0.0, std::sin(phi),
       0.0, std::sin(alpha), 0.0;
  return E;
}

RelativePose PlanarMotionToPose(const PlanarMotion& motion) {
  // The pose carries a unit translation; rho only scales it.
  const Eigen::Matrix3d R = RotationY(motion.theta);
  const Eigen::Vector3d direction(std::sin(motion.phi), 0.0,
                                  std::cos(motion.phi));
  RelativePose pose;
  pose.R = R;
  pose.t = -R * direction;
  return pose;
}

double EpipolarResidual(const Eigen::Matrix3d& E, const ImagePoint& p_i,
                        const ImagePoint& p_j) {
  RequireNormalized(p_i, "EpipolarResidual");
  RequireNormalized(p_j, "EpipolarResidual");
  return p_j.Homogeneous().dot(E * p_i.Homogeneous());
}

Eigen::Vector2d AffineConstraintResidual(const Eigen::Matrix3d& E,
                                         const AffineCorrespondence& ac) {
  RequireNormalized(ac.p_i, "AffineConstraintResidual");
  RequireNormalized(ac.p_j, "AffineConstraintResidual");
  const Eigen::Vector3d n_i = E.transpose() * ac.p_j.Homogeneous();
  const Eigen::Vector3d n_j = E * ac.p_i.Homogeneous();
  return (n_i + ac.EmbeddedAffine().transpose() * n_j).head<2>();
}

Eigen::Vector3d AlignPoint(const ImagePoint& p, const GravityAlignment& g) {
  RequireNormalized(p, "AlignPoint");
  return g.R_imu() * p.Homogeneous();
}

RelativePose RecoverOriginalPose(const Eigen::Matrix3d& R_y,
                                 const Eigen::Vector3d& t_tilde,
                                 const GravityAlignment& g_i,
                                 const GravityAlignment& g_j) {
  if (!(t_tilde.norm() > 0.0)) {
    throw Error(ErrorCode::kDegenerateMotion, "aligned translation is zero");
  }
  RelativePose pose;
  pose.R = g_j.R_imu().transpose() * R_y * g_i.R_imu();
  pose.t = (g_j.R_imu().transpose() * t_tilde).normalized();
  return pose;
}

double RotationErrorDeg(const Eigen::Matrix3d& R_gt, const Eigen::Matrix3d& R) {
  // Same angle as arccos((trace - 1) / 2), evaluated through atan2 so that
  // small angles keep full precision; the cosine is clamped to [-1, 1].
  const Eigen::Matrix3d delta = R_gt * R.transpose();
  const double cos_angle =
      std::clamp((delta.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Eigen::Vector3d axis(delta(2, 1) - delta(1, 2), delta(0, 2) - delta(2, 0),
                             delta(1, 0) - delta(0, 1));
  const double sin_angle = 0.5 * axis.norm();
  return RadToDeg(std::atan2(sin_angle, cos_angle));
}

double TranslationErrorDeg(const Eigen::Vector3d& t_gt,
                           const Eigen::Vector3d& t, TranslationSign sign) {
  const double n_gt = t_gt.norm();
  const double n = t.norm();
  if (!(n_gt > 0.0) || !(n > 0.0)) {
    throw Error(ErrorCode::kDegenerateMotion, "zero translation vector");
  }
  const double cos_angle = std::clamp(t_gt.dot(t) / (n_gt * n), -1.0, 1.0);
  const double sin_angle = t_gt.cross(t).norm() / (n_gt * n);
  const double angle = RadToDeg(std::atan2(sin_angle, cos_angle));
  if (sign == TranslationSign::kIgnore) return std::min(angle, 180.0 - angle);
  return angle;
}

double DeterminantResidual(const Eigen::Matrix3d& E) {
  return std::abs(UnitFrobenius(E).determinant());
}

double TraceConstraintResidual(const Eigen::Matrix3d& E) {
  const Eigen::Matrix3d U = UnitFrobenius(E);
  const Eigen::Matrix3d UUt = U * U.transpose();
  return (2.0 * UUt * U - UUt.trace() * U).norm();
}

std::optional<Eigen::Vector2d> TriangulateDepths(const RelativePose& pose,
                                                 const Eigen::Vector3d& ray_i,
                                                 const Eigen::Vector3d& ray_j) {
  Eigen::Matrix<double, 3, 2> A;
  A.col(0) = pose.R * ray_i;
  A.col(1) = -ray_j;
  const Eigen::Matrix2d normal = A.transpose() * A;
  const double det = normal.determinant();
  if (std::abs(det) <= 1e-14 * normal.squaredNorm()) return std::nullopt;
  return Eigen::Vector2d(normal.inverse() * (A.transpose() * -pose.t));
}

double CheiralityMargin(const RelativePose& pose, const Eigen::Vector3d& ray_i,
                        const Eigen::Vector3d& ray_j) {
  const auto depths = TriangulateDepths(pose, ray_i, ray_j);
  if (!depths) return -std::numeric_limits<double>::infinity();
  return depths->minCoeff();
}

}  // namespace affpose
