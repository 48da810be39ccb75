#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "affpose/geometry.h"

namespace affpose::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector4d RayleighPoint(double a, double f, double psi) {
  return {std::cos(psi) * std::sin(a), std::cos(psi) * std::cos(a),
          std::sin(psi) * std::sin(f), std::sin(psi) * std::cos(f)};
}

// Epipolar (divided by g) and affine residuals of the planar essential
// matrix on the normalized points (u g, v g).
Eigen::Vector3d FocalResidual(const AffineCorrespondence& c, double alpha,
                              double phi, double g) {
  const Eigen::Matrix3d E = PlanarEssential(alpha + phi, phi);
  const AffineCorrespondence n = MakeCorrespondence(
      g * c.p_i.u, g * c.p_i.v, g * c.p_j.u, g * c.p_j.v, c.A);
  const Eigen::Vector2d affine = AffineConstraintResidual(E, n);
  return {EpipolarResidual(E, n.p_i, n.p_j) / g, affine[0], affine[1]};
}

}  // namespace

GridMinimum PlanarGridMinimum(const Eigen::Matrix<double, 3, 4>& C,
                              double step_deg) {
  const int n = static_cast<int>(std::lround(360.0 / step_deg));
  const double step = 2.0 * kPi / n;
  std::vector<Eigen::Vector3d> vb(n);
  std::vector<double> angle(n);
  for (int k = 0; k < n; ++k) {
    angle[k] = -kPi + (k + 1) * step;
    vb[k] = C.col(2) * std::sin(angle[k]) + C.col(3) * std::cos(angle[k]);
  }
  GridMinimum best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d va =
        C.col(0) * std::sin(angle[i]) + C.col(1) * std::cos(angle[i]);
    for (int j = 0; j < n; ++j) {
      const double f = (va + vb[j]).squaredNorm();
      if (f < best.objective) {
        best.objective = f;
        best.alpha = angle[i];
        best.phi = angle[j];
      }
    }
  }
  return best;
}

PlanarMotion PlanarRayleighMinimizer(const Eigen::Matrix<double, 3, 4>& C) {
  auto value = [&](double a, double f, double psi) {
    return (C * RayleighPoint(a, f, psi)).squaredNorm();
  };
  const double coarse = 2.0 * kPi / 180.0;
  double best_a = 0.0, best_f = 0.0, best_psi = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 180; ++i) {
    for (int j = 0; j < 180; ++j) {
      for (int k = 0; k <= 90; ++k) {
        const double a = -kPi + i * coarse, f = -kPi + j * coarse;
        const double psi = k * kPi / 180.0;
        const double v = value(a, f, psi);
        if (v < best) {
          best = v;
          best_a = a;
          best_f = f;
          best_psi = psi;
        }
      }
    }
  }
  // Compass search.
  double h = coarse;
  while (h > 1e-13) {
    bool moved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double sign : {1.0, -1.0}) {
        double a = best_a, f = best_f, psi = best_psi;
        (axis == 0 ? a : axis == 1 ? f : psi) += sign * h;
        const double v = value(a, f, psi);
        if (v < best) {
          best = v;
          best_a = a;
          best_f = f;
          best_psi = psi;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  TrigVector x;
  x.x = RayleighPoint(best_a, best_f, best_psi);
  return x.ToMotion();
}

std::vector<FocalRoot> FocalGridRoots(const AffineCorrespondence& centered,
                                      double g_min, double g_max) {
  constexpr int kAngles = 90;
  constexpr int kScales = 48;
  const double step = 2.0 * kPi / kAngles;
  const double log_min = std::log(g_min), log_max = std::log(g_max);
  auto g_at = [&](int k) {
    return std::exp(log_min + (log_max - log_min) * k / (kScales - 1));
  };
  auto angle_at = [&](int k) { return -kPi + (k + 1) * step; };

  std::vector<double> grid(kAngles * kAngles * kScales);
  auto at = [&](int i, int j, int k) -> double& {
    return grid[(static_cast<std::size_t>(i) * kAngles + j) * kScales + k];
  };
  for (int i = 0; i < kAngles; ++i)
    for (int j = 0; j < kAngles; ++j)
      for (int k = 0; k < kScales; ++k)
        at(i, j, k) =
            FocalResidual(centered, angle_at(i), angle_at(j), g_at(k)).squaredNorm();

  std::vector<FocalRoot> roots;
  for (int i = 0; i < kAngles; ++i) {
    for (int j = 0; j < kAngles; ++j) {
      for (int k = 0; k < kScales; ++k) {
        const double v = at(i, j, k);
        bool minimum = true;
        for (int di = -1; di <= 1 && minimum; ++di)
          for (int dj = -1; dj <= 1 && minimum; ++dj)
            for (int dk = -1; dk <= 1 && minimum; ++dk) {
              if (!di && !dj && !dk) continue;
              const int kk = k + dk;
              if (kk < 0 || kk >= kScales) continue;
              const int ii = (i + di + kAngles) % kAngles;
              const int jj = (j + dj + kAngles) % kAngles;
              if (at(ii, jj, kk) < v) minimum = false;
            }
        if (!minimum) continue;

        // Newton on (alpha, phi, log g) with a forward-difference Jacobian.
        Eigen::Vector3d z(angle_at(i), angle_at(j), std::log(g_at(k)));
        auto F = [&](const Eigen::Vector3d& p) {
          return FocalResidual(centered, p[0], p[1], std::exp(p[2]));
        };
        Eigen::Vector3d r = F(z);
        for (int iter = 0; iter < 60 && r.norm() > 1e-15; ++iter) {
          Eigen::Matrix3d J;
          for (int c = 0; c < 3; ++c) {
            Eigen::Vector3d dz = Eigen::Vector3d::Zero();
            dz[c] = 1e-7;
            J.col(c) = (F(z + dz) - F(z - dz)) / 2e-7;
          }
          Eigen::Vector3d delta = J.fullPivLu().solve(-r);
          if (!delta.allFinite()) break;
          double scale = 1.0;
          bool improved = false;
          for (int half = 0; half < 30; ++half, scale *= 0.5) {
            const Eigen::Vector3d next = F(z + scale * delta);
            if (next.norm() < r.norm()) {
              z += scale * delta;
              r = next;
              improved = true;
              break;
            }
          }
          if (!improved) break;
        }
        const double g = std::exp(z[2]);
        if (r.norm() > 1e-10 || g < 0.5 * g_min || g > 2.0 * g_max) continue;

        Eigen::Vector4d x(std::sin(z[0]), std::cos(z[0]), std::sin(z[1]),
                          std::cos(z[1]));
        if (x[3] < 0.0 || (x[3] == 0.0 && x[2] < 0.0)) x = -x;
        FocalRoot root{std::atan2(x[0], x[1]), std::atan2(x[2], x[3]), g};
        const bool duplicate =
            std::any_of(roots.begin(), roots.end(), [&](const FocalRoot& o) {
              const Eigen::Vector4d y(std::sin(o.alpha), std::cos(o.alpha),
                                      std::sin(o.phi), std::cos(o.phi));
              return (x - y).norm() < 1e-6 &&
                     std::abs(o.g - g) < 1e-6 * std::max(o.g, g);
            });
        if (!duplicate) roots.push_back(root);
      }
    }
  }
  return roots;
}

Eigen::Matrix<double, 3, 6> AlignedSystemByEvaluation(
    const AffineCorrespondence& ac, const GravityAlignment& g_i,
    const GravityAlignment& g_j) {
  Eigen::Matrix<double, 3, 6> M;
  for (int k = 0; k < 6; ++k) {
    SimplifiedEssential unit;
    unit.e[k] = 1.0;
    const Eigen::Matrix3d E =
        g_j.R_imu().transpose() * unit.Matrix() * g_i.R_imu();
    const Eigen::Vector2d affine = AffineConstraintResidual(E, ac);
    M(0, k) = affine[0];
    M(1, k) = affine[1];
    M(2, k) = EpipolarResidual(E, ac.p_i, ac.p_j);
  }
  return M;
}

Eigen::Matrix<double, 7, 1> ConstraintsByEvaluation(const NullspaceParam& basis,
                                                    double beta, double gamma) {
  const Eigen::Matrix3d E =
      SimplifiedEssential{basis.Assemble(beta, gamma)}.Matrix();
  const Eigen::Matrix3d EEt = E * E.transpose();
  const Eigen::Matrix3d T = 2.0 * EEt * E - EEt.trace() * E;
  Eigen::Matrix<double, 7, 1> out;
  out << E.determinant(), T(0, 0), T(0, 1), T(0, 2), T(1, 0), T(1, 2), T(2, 1);
  return out;
}

Eigen::Matrix3d EssentialByExpansion(const Eigen::Matrix3d& R,
                                     const Eigen::Vector3d& t) {
  Eigen::Matrix3d E;
  for (int c = 0; c < 3; ++c) {
    E(0, c) = t.y() * R(2, c) - t.z() * R(1, c);
    E(1, c) = t.z() * R(0, c) - t.x() * R(2, c);
    E(2, c) = t.x() * R(1, c) - t.y() * R(0, c);
  }
  return E;
}

double QuaternionRotationErrorDeg(const Eigen::Matrix3d& R_gt,
                                  const Eigen::Matrix3d& R) {
  const Eigen::Quaterniond q(Eigen::Matrix3d(R_gt * R.transpose()));
  const double angle = 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
  return angle * 180.0 / kPi;
}

}  // namespace affpose::oracle
