#ifndef AFFPOSE_TYPES_H_
#define AFFPOSE_TYPES_H_

#include <optional>

#include <Eigen/Core>

namespace affpose {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Coordinate frame of an image measurement. Normalized coordinates are
// K^-1 applied to pixels; pixel coordinates used by the unknown-focal solver
// are centered on the principal point.
enum class Frame { kNormalized, kPixel };

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
  Frame frame = Frame::kNormalized;

  Eigen::Vector3d Homogeneous() const { return {u, v, 1.0}; }
};

// A point correspondence plus the 2x2 local affine map between the patches
// around the two points.
struct AffineCorrespondence {
  ImagePoint p_i;
  ImagePoint p_j;
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();

  Frame frame() const { return p_i.frame; }

  // 3x3 embedding [[A, 0], [0, 0]].
  Eigen::Matrix3d EmbeddedAffine() const;

  // True when |det A| is below 1e-8; such patches are kept but suspicious.
  bool HasNearSingularAffine() const;
};

AffineCorrespondence MakeCorrespondence(double u_i, double v_i, double u_j,
                                        double v_j, const Eigen::Matrix2d& A,
                                        Frame frame = Frame::kNormalized);

// Planar motion: yaw theta about the camera Y axis and translation direction
// phi in the XZ plane. Angles are kept in (-pi, pi]. The scale rho is only
// ever set by a generator; solvers cannot observe it.
struct PlanarMotion {
  double theta = 0.0;
  double phi = 0.0;
  std::optional<double> rho;

  static PlanarMotion Canonical(double theta, double phi);

  // The same essential matrix up to sign: phi + pi.
  PlanarMotion Flipped() const;
};

// x = (sin(theta - phi), cos(theta - phi), sin(phi), cos(phi)).
struct TrigVector {
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  // Set when both (x1, x2) and (x3, x4) lie on the unit circle.
  bool constrained = false;

  static TrigVector FromMotion(const PlanarMotion& motion);
  PlanarMotion ToMotion() const;
  bool SatisfiesUnitConstraints(double tolerance = 1e-9) const;
};

struct RelativePose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::UnitZ();

  // Normalizes t. Throws DegenerateMotion for zero t and InvalidArgument when
  // R is not a proper rotation within 1e-9.
  static RelativePose Make(const Eigen::Matrix3d& R, const Eigen::Vector3d& t);
};

// Pitch/roll alignment R_imu = R_x(pitch) * R_z(roll), mapping camera
// coordinates into a frame whose Y axis is the vertical direction.
class GravityAlignment {
 public:
  GravityAlignment() = default;
  GravityAlignment(double pitch, double roll);

  // Alignment whose rotation maps the camera-frame direction `up` onto +Y.
  static GravityAlignment FromVerticalDirection(const Eigen::Vector3d& up);

  double pitch() const { return pitch_; }
  double roll() const { return roll_; }
  const Eigen::Matrix3d& R_imu() const { return R_imu_; }

 private:
  double pitch_ = 0.0;
  double roll_ = 0.0;
  Eigen::Matrix3d R_imu_ = Eigen::Matrix3d::Identity();
};

// Essential matrix between gravity-aligned views:
//   [[ e1, e2, e3],
//    [ e4,  0, e5],
//    [-e3, e6, e1]]
struct SimplifiedEssential {
  Vector6d e = Vector6d::Zero();

  Eigen::Matrix3d Matrix() const;
  // Throws InconsistentPattern if E deviates from the pattern by more than
  // tolerance * ||E||_F.
  static SimplifiedEssential FromMatrix(const Eigen::Matrix3d& E,
                                        double tolerance = 1e-9);
  static SimplifiedEssential FromYawTranslation(double theta,
                                                const Eigen::Vector3d& t);
};

struct Intrinsics {
  double focal = 400.0;
  double cx = 320.0;
  double cy = 240.0;

  Eigen::Matrix3d K() const;
  ImagePoint ToPixel(const ImagePoint& normalized) const;
  ImagePoint ToNormalized(const ImagePoint& pixel) const;
};

}  // namespace affpose

#endif  // AFFPOSE_TYPES_H_
