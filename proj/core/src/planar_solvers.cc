#include "affpose/planar_solvers.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "affpose/error.h"

namespace affpose {
namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::Matrix<double, 3, 4> SystemMatrix(double u_i, double v_i, double u_j,
                                         double v_j,
                                         const Eigen::Matrix2d& A) {
  const double a11 = A(0, 0), a12 = A(0, 1), a21 = A(1, 0), a22 = A(1, 1);
  Eigen::Matrix<double, 3, 4> C;
  C << v_i, v_i * u_j, v_j, -u_i * v_j,
       0.0, a11 * v_i, a21, -(a21 * u_i + v_j),
       1.0, a12 * v_i + u_j, a22, -a22 * u_i;
  return C;
}

void RequireFullRank(const Eigen::Matrix<double, 3, 4>& C) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(C);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0) || s[2] < kRankTolerance * s[0]) {
    throw Error(ErrorCode::kDegenerateInput,
                "planar system has rank below 3");
  }
}

// The least-squares objective x^T Q x with x built from alpha = theta - phi
// and phi, rewritten over p = alpha + phi and m = alpha - phi:
//   f = c0 + c1 cos(p+m) + c2 sin(p+m) + c3 cos(p-m) + c4 sin(p-m)
//          + c5 cos p + c6 sin p + c7 cos m + c8 sin m.
// (p, m) and (p + 2 pi, m) describe x and -x, so each point of the (p, m)
// torus is one canonical stationary point.
struct TrigObjective {
  std::array<double, 9> c{};

  explicit TrigObjective(const Eigen::Matrix4d& Q) {
    c[0] = 0.5 * Q.trace();
    c[1] = 0.5 * (Q(1, 1) - Q(0, 0));
    c[2] = Q(0, 1);
    c[3] = 0.5 * (Q(3, 3) - Q(2, 2));
    c[4] = Q(2, 3);
    c[5] = Q(1, 3) - Q(0, 2);
    c[6] = Q(0, 3) + Q(1, 2);
    c[7] = Q(0, 2) + Q(1, 3);
    c[8] = Q(0, 3) - Q(1, 2);
  }

  Eigen::Vector2d Gradient(double p, double m) const {
    const double sp_m = std::sin(p + m), cp_m = std::cos(p + m);
    const double sd = std::sin(p - m), cd = std::cos(p - m);
    return {-c[1] * sp_m + c[2] * cp_m - c[3] * sd + c[4] * cd -
                c[5] * std::sin(p) + c[6] * std::cos(p),
            -c[1] * sp_m + c[2] * cp_m + c[3] * sd - c[4] * cd -
                c[7] * std::sin(m) + c[8] * std::cos(m)};
  }

  Eigen::Matrix2d Hessian(double p, double m) const {
    const double sp_m = std::sin(p + m), cp_m = std::cos(p + m);
    const double sd = std::sin(p - m), cd = std::cos(p - m);
    const double sum = -c[1] * cp_m - c[2] * sp_m;
    const double diff = -c[3] * cd - c[4] * sd;
    Eigen::Matrix2d H;
    H(0, 0) = sum + diff - c[5] * std::cos(p) - c[6] * std::sin(p);
    H(0, 1) = H(1, 0) = sum - diff;
    H(1, 1) = sum + diff - c[7] * std::cos(m) - c[8] * std::sin(m);
    return H;
  }

  // Gradient components as bilinear forms b(p)^T G b(m) with the basis
  // b(.) = (cos, sin, 1).
  void GradientForms(Eigen::Matrix3d& dp, Eigen::Matrix3d& dm) const {
    dp.setZero();
    dm.setZero();
    // cos(p+m) = cp cm - sp sm, sin(p+m) = sp cm + cp sm,
    // cos(p-m) = cp cm + sp sm, sin(p-m) = sp cm - cp sm.
    auto add_cos_sum = [](Eigen::Matrix3d& G, double k) { G(0, 0) += k; G(1, 1) -= k; };
    auto add_sin_sum = [](Eigen::Matrix3d& G, double k) { G(1, 0) += k; G(0, 1) += k; };
    auto add_cos_diff = [](Eigen::Matrix3d& G, double k) { G(0, 0) += k; G(1, 1) += k; };
    auto add_sin_diff = [](Eigen::Matrix3d& G, double k) { G(1, 0) += k; G(0, 1) -= k; };

    add_sin_sum(dp, -c[1]);
    add_cos_sum(dp, c[2]);
    add_sin_diff(dp, -c[3]);
    add_cos_diff(dp, c[4]);
    dp(1, 2) -= c[5];
    dp(0, 2) += c[6];

    add_sin_sum(dm, -c[1]);
    add_cos_sum(dm, c[2]);
    add_sin_diff(dm, c[3]);
    add_cos_diff(dm, -c[4]);
    dm(2, 1) -= c[7];
    dm(2, 0) += c[8];
  }
};

// Polynomial coefficients [kP][kM] (ascending powers) of
// (1 + P^2)(1 + M^2) b(q)^T G b(m) under the half-angle substitution
// P = tan(q / 2), M = tan(m / 2).
Eigen::Matrix3d HalfAnglePolynomial(const Eigen::Matrix3d& G) {
  Eigen::Matrix3d B;
  // Rows: cos, sin, 1 multiplied by (1 + T^2), columns: T^0, T^1, T^2.
  B << 1.0, 0.0, -1.0,
       0.0, 2.0, 0.0,
       1.0, 0.0, 1.0;
  return B.transpose() * G * B;
}

// Rotates the p-part of a bilinear form so that it is expressed in
// q = p - offset.
Eigen::Matrix3d ShiftFirstAngle(const Eigen::Matrix3d& G, double offset) {
  const double co = std::cos(offset), so = std::sin(offset);
  Eigen::Matrix3d S;
  S << co, -so, 0.0,
       so, co, 0.0,
       0.0, 0.0, 1.0;
  return S.transpose() * G;
}

struct AnglePair {
  double p;
  double m;
};

// Real roots of the two gradient equations by the hidden-variable resultant
// in M: the 4x4 Sylvester matrix S(P) = S0 + P S1 + P^2 S2 acting on
// (M^3, M^2, M, 1) is singular exactly at common roots. Its block companion
// linearization is an 8x8 eigenvalue problem.
std::vector<AnglePair> GradientRoots(const TrigObjective& objective) {
  Eigen::Matrix3d dp, dm;
  objective.GradientForms(dp, dm);

  // Pick the p offset that keeps S2 best conditioned, so that no root sits at
  // P = infinity.
  constexpr std::array<double, 6> kOffsets = {0.37, 1.21, 2.03, -0.77, -1.63,
                                              2.71};
  double best_rcond = -1.0;
  double offset = kOffsets[0];
  std::array<Eigen::Matrix4d, 3> S;
  for (double candidate : kOffsets) {
    const Eigen::Matrix3d F1 = HalfAnglePolynomial(ShiftFirstAngle(dp, candidate));
    const Eigen::Matrix3d F2 = HalfAnglePolynomial(ShiftFirstAngle(dm, candidate));
    std::array<Eigen::Matrix4d, 3> trial;
    for (int k = 0; k < 3; ++k) {
      trial[k].setZero();
      for (int j = 0; j < 3; ++j) {
        trial[k](0, 2 - j) = F1(k, j);
        trial[k](1, 3 - j) = F1(k, j);
        trial[k](2, 2 - j) = F2(k, j);
        trial[k](3, 3 - j) = F2(k, j);
      }
    }
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(trial[2]);
    const double rcond = svd.singularValues()[0] > 0.0
                             ? svd.singularValues()[3] / svd.singularValues()[0]
                             : 0.0;
    if (rcond > best_rcond) {
      best_rcond = rcond;
      offset = candidate;
      S = trial;
    }
    if (rcond > 1e-3) break;
  }
  if (!(best_rcond > 1e-14)) {
    throw Error(ErrorCode::kNumericalFailure,
                "resultant leading block is singular for every offset");
  }

  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(S[2]);
  Eigen::Matrix<double, 8, 8> companion = Eigen::Matrix<double, 8, 8>::Zero();
  companion.topRightCorner<4, 4>().setIdentity();
  companion.bottomLeftCorner<4, 4>() = -lu.solve(S[0]);
  companion.bottomRightCorner<4, 4>() = -lu.solve(S[1]);

  Eigen::EigenSolver<Eigen::Matrix<double, 8, 8>> eig(companion, false);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "companion eigensolver failed");
  }

  std::vector<AnglePair> roots;
  for (int k = 0; k < 8; ++k) {
    const std::complex<double> z = eig.eigenvalues()[k];
    // Loose on purpose: near-real roots are polished and verified later.
    if (std::abs(z.imag()) > 1e-4 * std::max(1.0, std::abs(z))) continue;
    const double P = z.real();
    const Eigen::Matrix4d SP = S[0] + P * S[1] + P * P * S[2];
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(SP, Eigen::ComputeFullV);
    const Eigen::Vector4d v = svd.matrixV().col(3);
    // v ~ (M^3, M^2, M, 1); use the best conditioned ratio.
    double M = 0.0;
    double denominator = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(v[i + 1]) > std::abs(denominator)) {
        denominator = v[i + 1];
        M = v[i] / v[i + 1];
      }
    }
    if (denominator == 0.0) continue;
    roots.push_back({2.0 * std::atan(P) + offset, 2.0 * std::atan(M)});
  }
  return roots;
}

// Damped Newton on the gradient of the objective.
bool PolishStationaryPoint(const TrigObjective& objective, AnglePair& angles) {
  auto grad_norm = [&](const AnglePair& a) {
    return objective.Gradient(a.p, a.m).norm();
  };
  double current = grad_norm(angles);
  for (int iter = 0; iter < 30 && current > 1e-15; ++iter) {
    const Eigen::Vector2d g = objective.Gradient(angles.p, angles.m);
    const Eigen::Matrix2d H = objective.Hessian(angles.p, angles.m);
    const Eigen::Vector2d step = H.fullPivLu().solve(-g);
    if (!step.allFinite()) break;
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 20; ++half, scale *= 0.5) {
      const AnglePair next{angles.p + scale * step[0],
                           angles.m + scale * step[1]};
      const double value = grad_norm(next);
      if (value < current) {
        angles = next;
        current = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return current <= 1e-9;
}

// Gauss-Newton on the residual vector C x(alpha, phi). Near-degenerate
// systems have a very flat valley that C^T C cannot resolve in double
// precision, while a QR solve on the residual form can. Only applied at local
// minima, where Gauss-Newton converges to the same point.
void PolishMinimum(const Eigen::Matrix<double, 3, 4>& C, AnglePair& angles) {
  double alpha = 0.5 * (angles.p + angles.m);
  double phi = 0.5 * (angles.p - angles.m);
  auto residual = [&](double a, double f) {
    return Eigen::Vector3d(C * Eigen::Vector4d(std::sin(a), std::cos(a),
                                               std::sin(f), std::cos(f)));
  };
  Eigen::Vector3d r = residual(alpha, phi);
  double current = r.norm();
  for (int iter = 0; iter < 20 && current > 0.0; ++iter) {
    Eigen::Matrix<double, 3, 2> J;
    J.col(0) = C.leftCols<2>() * Eigen::Vector2d(std::cos(alpha), -std::sin(alpha));
    J.col(1) = C.rightCols<2>() * Eigen::Vector2d(std::cos(phi), -std::sin(phi));
    const Eigen::Vector2d step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    const Eigen::Vector3d next = residual(alpha + step[0], phi + step[1]);
    if (!(next.norm() < current)) break;
    alpha += step[0];
    phi += step[1];
    r = next;
    current = next.norm();
  }
  angles.p = alpha + phi;
  angles.m = alpha - phi;
}

Eigen::Vector4d TrigFromAngles(const AnglePair& a) {
  const double alpha = 0.5 * (a.p + a.m);
  const double phi = 0.5 * (a.p - a.m);
  Eigen::Vector4d x(std::sin(alpha), std::cos(alpha), std::sin(phi),
                    std::cos(phi));
  if (x[3] < 0.0 || (x[3] == 0.0 && x[2] < 0.0)) x = -x;
  return x;
}

}  // namespace

PlanarSystem BuildPlanarSystem(const AffineCorrespondence& ac) {
  if (ac.p_i.frame != Frame::kNormalized || ac.p_j.frame != Frame::kNormalized) {
    throw Error(ErrorCode::kFrameMismatch,
                "planar system expects normalized coordinates");
  }
  PlanarSystem system;
  system.C = SystemMatrix(ac.p_i.u, ac.p_i.v, ac.p_j.u, ac.p_j.v, ac.A);
  return system;
}

TrigVector ClosedFormTrigVector(const PlanarSystem& system) {
  RequireFullRank(system.C);
  // The least eigenvector of C^T C is the last right singular vector of C;
  // taking it from C avoids squaring the condition number.
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(system.C,
                                                          Eigen::ComputeFullV);
  TrigVector x;
  x.x = svd.matrixV().col(3);
  if (!x.x.allFinite()) {
    throw Error(ErrorCode::kNumericalFailure, "singular value decomposition failed");
  }
  x.constrained = false;
  return x;
}

PlanarMotion SolvePlanarClosedForm(const PlanarSystem& system) {
  return ClosedFormTrigVector(system).ToMotion();
}

LeastSquaresSolution SolvePlanarLeastSquares(const PlanarSystem& system) {
  RequireFullRank(system.C);
  const Eigen::Matrix4d Q = system.C.transpose() * system.C;
  // The stationary points do not depend on the scale of Q.
  const double scale = Q.cwiseAbs().maxCoeff();
  const Eigen::Matrix4d Qn = Q / scale;
  const TrigObjective objective(Qn);

  LeastSquaresSolution solution;
  for (AnglePair angles : GradientRoots(objective)) {
    if (!PolishStationaryPoint(objective, angles)) continue;
    if (objective.Hessian(angles.p, angles.m).determinant() > 0.0 &&
        objective.Hessian(angles.p, angles.m)(0, 0) > 0.0) {
      PolishMinimum(system.C, angles);
    }
    StationaryPoint point;
    point.x.x = TrigFromAngles(angles);
    point.x.constrained = true;
    const Eigen::Vector4d Qx = Q * point.x.x;
    point.lambda1 = -point.x.x.head<2>().dot(Qx.head<2>());
    point.lambda2 = -point.x.x.tail<2>().dot(Qx.tail<2>());
    point.objective = (system.C * point.x.x).squaredNorm();

    const auto kkt = StationarityResiduals(system, point);
    if (kkt.cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, scale)) continue;

    const bool duplicate = std::any_of(
        solution.points.begin(), solution.points.end(),
        [&](const StationaryPoint& other) {
          return (other.x.x - point.x.x).norm() < 1e-7;
        });
    if (!duplicate) solution.points.push_back(point);
  }
  if (solution.points.empty()) {
    throw Error(ErrorCode::kNumericalFailure,
                "no real stationary point was recovered");
  }
  std::stable_sort(solution.points.begin(), solution.points.end(),
                   [](const StationaryPoint& a, const StationaryPoint& b) {
                     return a.objective < b.objective;
                   });
  solution.best = 0;
  return solution;
}

Eigen::Matrix<double, 6, 1> StationarityResiduals(const PlanarSystem& system,
                                                  const StationaryPoint& point) {
  const Eigen::Matrix4d Q = system.C.transpose() * system.C;
  const Eigen::Vector4d& x = point.x.x;
  Eigen::Vector4d lambdas(point.lambda1, point.lambda1, point.lambda2,
                          point.lambda2);
  Eigen::Matrix<double, 6, 1> r;
  r.head<4>() = Q * x + lambdas.cwiseProduct(x);
  r[4] = x.head<2>().squaredNorm() - 1.0;
  r[5] = x.tail<2>().squaredNorm() - 1.0;
  return r;
}

FocalSolveResult SolvePlanarUnknownFocal(const AffineCorrespondence& ac) {
  if (ac.p_i.frame != Frame::kPixel || ac.p_j.frame != Frame::kPixel) {
    throw Error(ErrorCode::kFrameMismatch,
                "unknown-focal solver expects centered pixel coordinates");
  }
  // With y2 = g x2 and y4 = g x4, and the first equation divided by g, the
  // three equations are linear in (x1, y2, x3, y4) with the same matrix as the
  // calibrated case built on pixel coordinates. Coordinates are rescaled by
  // s first, which rescales g by 1 / s.
  const double extent = std::max({std::abs(ac.p_i.u), std::abs(ac.p_i.v),
                                  std::abs(ac.p_j.u), std::abs(ac.p_j.v), 1e-12});
  const double s = 1.0 / extent;
  const Eigen::Matrix<double, 3, 4> C = SystemMatrix(
      s * ac.p_i.u, s * ac.p_i.v, s * ac.p_j.u, s * ac.p_j.v, ac.A);
  RequireFullRank(C);

  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(C, Eigen::ComputeFullV);
  const Eigen::Vector4d n = svd.matrixV().col(3);

  // lambda^2 (n1^2 + n2^2 / g^2) = 1 and lambda^2 (n3^2 + n4^2 / g^2) = 1,
  // linear in U = lambda^2 and V = lambda^2 / g^2.
  Eigen::Matrix2d M;
  M << n[0] * n[0], n[1] * n[1], n[2] * n[2], n[3] * n[3];
  if (std::abs(M.determinant()) <= 1e-12 * M.squaredNorm()) {
    throw Error(ErrorCode::kDegenerateInput,
                "focal length is not determined by this correspondence");
  }
  const Eigen::Vector2d uv = M.partialPivLu().solve(Eigen::Vector2d::Ones());

  FocalSolveResult result;
  // (+-lambda, +-g): four nontrivial solutions, all real iff U, V > 0.
  result.num_candidates = 4;
  if (!(uv[0] > 0.0) || !(uv[1] > 0.0)) {
    throw Error(ErrorCode::kNoRealSolution,
                "no real focal length satisfies the constraints");
  }
  const double g_scaled = std::sqrt(uv[0] / uv[1]);
  const double g = s * g_scaled;
  for (double sign : {1.0, -1.0}) {
    const double lambda = sign * std::sqrt(uv[0]);
    FocalSolution solution;
    solution.x.x << lambda * n[0], lambda * n[1] / g_scaled, lambda * n[2],
        lambda * n[3] / g_scaled;
    solution.x.constrained = true;
    solution.motion = solution.x.ToMotion();
    solution.inv_focal = g;
    solution.focal = 1.0 / g;
    result.solutions.push_back(solution);
  }
  return result;
}

Eigen::Matrix<double, 5, 1> FocalSystemResiduals(const AffineCorrespondence& ac,
                                                 const Eigen::Vector4d& x,
                                                 double g) {
  const double ui = ac.p_i.u, vi = ac.p_i.v, uj = ac.p_j.u, vj = ac.p_j.v;
  const double a1 = ac.A(0, 0), a2 = ac.A(0, 1), a3 = ac.A(1, 0),
               a4 = ac.A(1, 1);
  Eigen::Matrix<double, 5, 1> r;
  r[0] = vi * g * x[0] + vi * uj * g * g * x[1] + vj * g * x[2] -
         ui * vj * g * g * x[3];
  r[1] = a1 * vi * g * x[1] + a3 * x[2] - (a3 * ui + vj) * g * x[3];
  r[2] = x[0] + (a2 * vi + uj) * g * x[1] + a4 * x[2] - a4 * ui * g * x[3];
  r[3] = x[0] * x[0] + x[1] * x[1] - 1.0;
  r[4] = x[2] * x[2] + x[3] * x[3] - 1.0;
  return r;
}

}  // namespace affpose
