#include "affpose/types.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "affpose/error.h"
#include "affpose/geometry.h"

namespace affpose {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateMotion: return "DegenerateMotion";
    case ErrorCode::kFrameMismatch: return "FrameMismatch";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNoRealSolution: return "NoRealSolution";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInconsistentPattern: return "InconsistentPattern";
    case ErrorCode::kEmptyResult: return "EmptyResult";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kAllIterationsFailed: return "AllIterationsFailed";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Eigen::Matrix3d AffineCorrespondence::EmbeddedAffine() const {
  Eigen::Matrix3d A_hat = Eigen::Matrix3d::Zero();
  A_hat.topLeftCorner<2, 2>() = A;
  return A_hat;
}

bool AffineCorrespondence::HasNearSingularAffine() const {
  return std::abs(A.determinant()) < 1e-8;
}

AffineCorrespondence MakeCorrespondence(double u_i, double v_i, double u_j,
                                        double v_j, const Eigen::Matrix2d& A,
                                        Frame frame) {
  AffineCorrespondence ac;
  ac.p_i = {u_i, v_i, frame};
  ac.p_j = {u_j, v_j, frame};
  ac.A = A;
  return ac;
}

PlanarMotion PlanarMotion::Canonical(double theta, double phi) {
  PlanarMotion motion;
  motion.theta = CanonicalAngle(theta);
  motion.phi = CanonicalAngle(phi);
  return motion;
}

PlanarMotion PlanarMotion::Flipped() const {
  PlanarMotion flipped = Canonical(theta, phi + std::numbers::pi);
  flipped.rho = rho;
  return flipped;
}

TrigVector TrigVector::FromMotion(const PlanarMotion& motion) {
  TrigVector x;
  const double alpha = motion.theta - motion.phi;
  x.x << std::sin(alpha), std::cos(alpha), std::sin(motion.phi),
      std::cos(motion.phi);
  x.constrained = true;
  return x;
}

PlanarMotion TrigVector::ToMotion() const {
  const double phi = std::atan2(x[2], x[3]);
  const double theta = std::atan2(x[0], x[1]) + phi;
  return PlanarMotion::Canonical(theta, phi);
}

bool TrigVector::SatisfiesUnitConstraints(double tolerance) const {
  return std::abs(x.head<2>().squaredNorm() - 1.0) <= tolerance &&
         std::abs(x.tail<2>().squaredNorm() - 1.0) <= tolerance;
}

RelativePose RelativePose::Make(const Eigen::Matrix3d& R,
                                const Eigen::Vector3d& t) {
  const double norm = t.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kDegenerateMotion, "translation has zero norm");
  }
  if ((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() > 1e-9 ||
      std::abs(R.determinant() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "R is not a rotation");
  }
  RelativePose pose;
  pose.R = R;
  pose.t = t / norm;
  return pose;
}

GravityAlignment::GravityAlignment(double pitch, double roll)
    : pitch_(pitch), roll_(roll), R_imu_(RotationX(pitch) * RotationZ(roll)) {}

GravityAlignment GravityAlignment::FromVerticalDirection(
    const Eigen::Vector3d& up) {
  const Eigen::Vector3d n = up.normalized();
  // The second row of R_x(pitch) R_z(roll) is
  // (-cos(pitch) sin(roll), cos(pitch) cos(roll), sin(pitch)).
  const double pitch = std::asin(std::clamp(n.z(), -1.0, 1.0));
  const double roll = std::atan2(-n.x(), n.y());
  return GravityAlignment(pitch, roll);
}

Eigen::Matrix3d SimplifiedEssential::Matrix() const {
  Eigen::Matrix3d E;
  E << e[0], e[1], e[2],
       e[3], 0.0, e[4],
       -e[2], e[5], e[0];
  return E;
}

SimplifiedEssential SimplifiedEssential::FromMatrix(const Eigen::Matrix3d& E,
                                                    double tolerance) {
  const double scale = std::max(E.norm(), 1e-300);
  const double deviation = std::abs(E(1, 1)) + std::abs(E(2, 0) + E(0, 2)) +
                           std::abs(E(2, 2) - E(0, 0));
  if (deviation > tolerance * scale) {
    throw Error(ErrorCode::kInconsistentPattern,
                "matrix does not follow the simplified essential pattern");
  }
  SimplifiedEssential s;
  s.e << 0.5 * (E(0, 0) + E(2, 2)), E(0, 1), 0.5 * (E(0, 2) - E(2, 0)),
      E(1, 0), E(1, 2), E(2, 1);
  return s;
}

SimplifiedEssential SimplifiedEssential::FromYawTranslation(
    double theta, const Eigen::Vector3d& t) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  SimplifiedEssential out;
  out.e << t.y() * s, -t.z(), t.y() * c, t.z() * c - t.x() * s,
      -t.x() * c - t.z() * s, t.x();
  return out;
}

Eigen::Matrix3d Intrinsics::K() const {
  Eigen::Matrix3d K;
  K << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
  return K;
}

ImagePoint Intrinsics::ToPixel(const ImagePoint& normalized) const {
  return {focal * normalized.u + cx, focal * normalized.v + cy, Frame::kPixel};
}

ImagePoint Intrinsics::ToNormalized(const ImagePoint& pixel) const {
  return {(pixel.u - cx) / focal, (pixel.v - cy) / focal, Frame::kNormalized};
}

}  // namespace affpose
