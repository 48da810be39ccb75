#include "affpose/vertical_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/polynomial.h"

namespace affpose {
namespace {

// Polynomial in (beta, gamma) of total degree <= 3; c[i][j] multiplies
// beta^i gamma^j.
struct BiPoly {
  std::array<std::array<double, 4>, 4> c{};

  static BiPoly Linear(double b, double g, double one) {
    BiPoly p;
    p.c[1][0] = b;
    p.c[0][1] = g;
    p.c[0][0] = one;
    return p;
  }

  BiPoly operator+(const BiPoly& o) const {
    BiPoly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    return r;
  }

  BiPoly operator-(const BiPoly& o) const { return *this + o * -1.0; }

  BiPoly operator*(double k) const {
    BiPoly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = k * c[i][j];
    return r;
  }

  BiPoly operator*(const BiPoly& o) const {
    BiPoly r;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; i + j < 4; ++j) {
        if (c[i][j] == 0.0) continue;
        for (int k = 0; i + k < 4; ++k) {
          for (int l = 0; i + j + k + l < 4; ++l) {
            r.c[i + k][j + l] += c[i][j] * o.c[k][l];
          }
        }
      }
    }
    return r;
  }

  Eigen::Matrix<double, 1, kNumMonomials> Row() const {
    Eigen::Matrix<double, 1, kNumMonomials> row;
    row << c[3][0], c[2][1], c[2][0], c[1][2], c[1][1], c[1][0], c[0][3],
        c[0][2], c[0][1], c[0][0];
    return row;
  }
};

using PolyMatrix = std::array<std::array<BiPoly, 3>, 3>;

PolyMatrix Multiply(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] = r[i][j] + a[i][k] * b[k][j];
  return r;
}

PolyMatrix Transpose(const PolyMatrix& a) {
  PolyMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

Eigen::Matrix<double, kNumMonomials, 2> MonomialJacobian(double b, double g) {
  Eigen::Matrix<double, kNumMonomials, 2> J;
  J << 3 * b * b, 0.0,
       2 * b * g, b * b,
       2 * b, 0.0,
       g * g, 2 * b * g,
       g, b,
       1.0, 0.0,
       0.0, 3 * g * g,
       0.0, 2 * g,
       0.0, 1.0,
       0.0, 0.0;
  return J;
}

// Gauss-Newton on all seven constraint polynomials.
BetaGamma Polish(const ConstraintSystem& cs, BetaGamma root) {
  double current = cs.Evaluate(root.beta, root.gamma).norm();
  for (int iter = 0; iter < 10 && current > 0.0; ++iter) {
    const Eigen::Matrix<double, 7, 2> J =
        cs.M1 * MonomialJacobian(root.beta, root.gamma);
    const Eigen::Matrix<double, 7, 1> r = cs.Evaluate(root.beta, root.gamma);
    const Eigen::Vector2d step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    const BetaGamma next{root.beta + step[0], root.gamma + step[1]};
    const double value = cs.Evaluate(next.beta, next.gamma).norm();
    if (!(value < current)) break;
    root = next;
    current = value;
  }
  return root;
}

// True when the correspondence is explained by a pure rotation (yaw between
// the aligned views), which leaves the translation unobservable.
bool IsRotationOnly(const AffineCorrespondence& ac, const GravityAlignment& g_i,
                    const GravityAlignment& g_j) {
  const Eigen::Vector3d a_i = AlignPoint(ac.p_i, g_i);
  const Eigen::Vector3d a_j = AlignPoint(ac.p_j, g_j);
  const double theta = std::atan2(a_i.x() * a_j.z() - a_i.z() * a_j.x(),
                                  a_i.x() * a_j.x() + a_i.z() * a_j.z());
  const Eigen::Matrix3d R_y = RotationY(theta);
  if ((R_y * a_i).cross(a_j).norm() > 1e-10 * a_i.norm() * a_j.norm()) {
    return false;
  }
  const Eigen::Matrix3d H = g_j.R_imu().transpose() * R_y * g_i.R_imu();
  const Eigen::Vector3d x = H * ac.p_i.Homogeneous();
  if (std::abs(x.z()) < 1e-12) return false;
  Eigen::Matrix2d J;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      J(k, l) = (H(k, l) - x[k] / x.z() * H(2, l)) / x.z();
    }
  }
  return (J - ac.A).norm() <= 1e-9 * (1.0 + ac.A.norm());
}

VerticalSolveResult SolveVerticalImpl(const AffineCorrespondence& ac,
                                      const GravityAlignment& g_i,
                                      const GravityAlignment& g_j,
                                      bool require_cheirality) {
  if (IsRotationOnly(ac, g_i, g_j)) {
    throw Error(ErrorCode::kDegenerateMotion,
                "correspondence is consistent with a pure rotation");
  }
  const AlignedSystem system = BuildAlignedSystem(ac, g_i, g_j);
  const NullspaceParam basis = NullspaceBasis(system.M);
  const ConstraintSystem cs = BuildConstraintMatrix(basis);
  const BetaGammaResult roots = SolveBetaGamma(cs);

  VerticalSolveResult result;
  result.num_roots = static_cast<int>(roots.roots.size());
  const Eigen::Vector3d ray_i = ac.p_i.Homogeneous();
  const Eigen::Vector3d ray_j = ac.p_j.Homogeneous();
  for (const BetaGamma& root : roots.roots) {
    SimplifiedEssential essential;
    essential.e = basis.Assemble(root.beta, root.gamma).normalized();
    std::vector<YawTranslation> decompositions;
    try {
      decompositions = DecomposeSimplified(essential);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInconsistentPattern) throw;
      continue;
    }
    for (const YawTranslation& yt : decompositions) {
      for (double sign : {1.0, -1.0}) {
        VerticalCandidate candidate;
        candidate.pose =
            RecoverOriginalPose(RotationY(yt.theta), sign * yt.t_tilde, g_i, g_j);
        candidate.essential = essential;
        candidate.cheirality_margin =
            CheiralityMargin(candidate.pose, ray_i, ray_j);
        if (require_cheirality && !(candidate.cheirality_margin > 0.0)) continue;
        result.candidates.push_back(candidate);
      }
    }
  }
  if (result.candidates.empty()) {
    throw Error(ErrorCode::kEmptyResult,
                "no candidate places the point in front of both cameras");
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const VerticalCandidate& a, const VerticalCandidate& b) {
                     return a.cheirality_margin > b.cheirality_margin;
                   });
  return result;
}

}  // namespace

AlignedSystem BuildAlignedSystem(const AffineCorrespondence& ac,
                                 const GravityAlignment& g_i,
                                 const GravityAlignment& g_j) {
  AlignedSystem s;
  s.aligned_i = AlignPoint(ac.p_i, g_i);
  s.aligned_j = AlignPoint(ac.p_j, g_j);
  s.A_tilde = ac.EmbeddedAffine().transpose() * g_j.R_imu().transpose();

  const double ui = s.aligned_i.x(), vi = s.aligned_i.y(), wi = s.aligned_i.z();
  const double uj = s.aligned_j.x(), vj = s.aligned_j.y(), wj = s.aligned_j.z();
  const Eigen::Matrix3d& Ri = g_i.R_imu();
  for (int k = 0; k < 2; ++k) {
    const double r0 = Ri(0, k), r1 = Ri(1, k), r2 = Ri(2, k);
    const double a0 = s.A_tilde(k, 0), a1 = s.A_tilde(k, 1),
                 a2 = s.A_tilde(k, 2);
    s.M(k, 0) = r0 * uj + r2 * wj + a0 * ui + a2 * wi;
    s.M(k, 1) = r1 * uj + a0 * vi;
    s.M(k, 2) = r2 * uj - r0 * wj + a0 * wi - a2 * ui;
    s.M(k, 3) = r0 * vj + a1 * ui;
    s.M(k, 4) = r2 * vj + a1 * wi;
    s.M(k, 5) = r1 * wj + a2 * vi;
  }
  s.M(2, 0) = uj * ui + wj * wi;
  s.M(2, 1) = uj * vi;
  s.M(2, 2) = uj * wi - wj * ui;
  s.M(2, 3) = vj * ui;
  s.M(2, 4) = vj * wi;
  s.M(2, 5) = wj * vi;
  return s;
}

NullspaceParam NullspaceBasis(const Eigen::Matrix<double, 3, 6>& M) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0) || s[2] < 1e-10 * s[0]) {
    throw Error(ErrorCode::kDegenerateInput,
                "aligned system has rank below 3");
  }
  NullspaceParam basis;
  basis.m1 = svd.matrixV().col(5);
  basis.m2 = svd.matrixV().col(4);
  basis.m3 = svd.matrixV().col(3);
  return basis;
}

std::array<double, kNumMonomials> MonomialVector(double b, double g) {
  return {b * b * b, b * b * g, b * b, b * g * g, b * g, b,
          g * g * g, g * g,     g,     1.0};
}

Eigen::Matrix<double, 7, 1> ConstraintSystem::Evaluate(double beta,
                                                       double gamma) const {
  const auto v = MonomialVector(beta, gamma);
  return M1 * Eigen::Map<const Eigen::Matrix<double, kNumMonomials, 1>>(v.data());
}

ConstraintSystem BuildConstraintMatrix(const NullspaceParam& basis) {
  const Eigen::Matrix3d E1 = SimplifiedEssential{basis.m1}.Matrix();
  const Eigen::Matrix3d E2 = SimplifiedEssential{basis.m2}.Matrix();
  const Eigen::Matrix3d E3 = SimplifiedEssential{basis.m3}.Matrix();
  PolyMatrix E;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      E[i][j] = BiPoly::Linear(E1(i, j), E2(i, j), E3(i, j));

  const BiPoly det = E[0][0] * (E[1][1] * E[2][2] - E[1][2] * E[2][1]) -
                     E[0][1] * (E[1][0] * E[2][2] - E[1][2] * E[2][0]) +
                     E[0][2] * (E[1][0] * E[2][1] - E[1][1] * E[2][0]);

  const PolyMatrix EEt = Multiply(E, Transpose(E));
  const PolyMatrix EEtE = Multiply(EEt, E);
  const BiPoly trace = EEt[0][0] + EEt[1][1] + EEt[2][2];

  ConstraintSystem cs;
  cs.M1.row(0) = det.Row();
  constexpr std::array<std::array<int, 2>, 6> kEntries = {
      {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 1}}};
  for (int r = 0; r < 6; ++r) {
    const auto [i, j] = kEntries[r];
    cs.M1.row(r + 1) = (EEtE[i][j] * 2.0 - trace * E[i][j]).Row();
  }
  return cs;
}

BetaGammaResult SolveBetaGamma(const ConstraintSystem& cs) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 7, kNumMonomials>> full(cs.M1);
  const auto& sv = full.singularValues();
  const int rank = static_cast<int>(
      (sv.array() > 1e-8 * std::max(sv[0], 1e-300)).count());
  if (rank != 6) {
    throw Error(ErrorCode::kRankDeficient,
                "constraint matrix rank is " + std::to_string(rank) +
                    ", expected 6");
  }

  BetaGammaResult result;
  double best_sigma = -1.0;
  Eigen::Matrix<double, 6, kNumMonomials> rows;
  for (int drop = 0; drop < 7; ++drop) {
    Eigen::Matrix<double, 6, kNumMonomials> candidate;
    for (int r = 0, k = 0; r < 7; ++r) {
      if (r != drop) candidate.row(k++) = cs.M1.row(r);
    }
    const Eigen::JacobiSVD<Eigen::Matrix<double, 6, kNumMonomials>> svd(candidate);
    if (svd.singularValues()[5] > best_sigma) {
      best_sigma = svd.singularValues()[5];
      result.dropped_row = drop;
      rows = candidate;
    }
  }

  // Eliminate the six monomials containing beta; the last two reduced rows
  // read beta*gamma + qa(gamma) = 0 and beta + qb(gamma) = 0.
  const Eigen::Matrix<double, 6, 6> L = rows.leftCols<6>();
  const Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(L);
  if (!(std::abs(lu.determinant()) > 0.0)) {
    throw Error(ErrorCode::kRankDeficient, "beta block is singular");
  }
  const Eigen::Matrix<double, 6, 4> X = lu.solve(rows.rightCols<4>());
  if (!X.allFinite()) {
    throw Error(ErrorCode::kRankDeficient, "beta block is singular");
  }
  QuarticPolys& q = result.quartic;
  for (int k = 0; k < 4; ++k) {
    q.qa[k] = X(4, k);
    q.qb[k] = X(5, k);
  }
  q.qc = {q.qb[0], q.qb[1] - q.qa[0], q.qb[2] - q.qa[1], q.qb[3] - q.qa[2],
          -q.qa[3]};

  for (double gamma : RealPolynomialRoots(q.qc, 1e-6)) {
    const double beta = -EvaluatePolynomial(q.qb, gamma);
    BetaGamma root = Polish(cs, {beta, gamma});
    // The basis is orthonormal, so ||e|| = sqrt(beta^2 + gamma^2 + 1) and the
    // cubic constraints are compared on the unit-norm e.
    const double scale =
        std::pow(root.beta * root.beta + root.gamma * root.gamma + 1.0, 1.5);
    if (!std::isfinite(scale)) continue;
    if (cs.Evaluate(root.beta, root.gamma).cwiseAbs().maxCoeff() / scale > 1e-6) {
      continue;
    }
    const bool duplicate = std::any_of(
        result.roots.begin(), result.roots.end(), [&](const BetaGamma& o) {
          return std::abs(o.beta - root.beta) <= 1e-9 * (1 + std::abs(o.beta)) &&
                 std::abs(o.gamma - root.gamma) <= 1e-9 * (1 + std::abs(o.gamma));
        });
    if (!duplicate) result.roots.push_back(root);
  }
  if (result.roots.empty()) {
    throw Error(ErrorCode::kNoRealSolution, "quartic has no real root");
  }
  return result;
}

std::vector<YawTranslation> DecomposeSimplified(const SimplifiedEssential& E) {
  const Vector6d& e = E.e;
  const double norm = E.Matrix().norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kInconsistentPattern, "zero essential matrix");
  }
  const double tol = 1e-6 * norm;
  const double tx = e[5];
  const double tz = -e[1];
  std::vector<YawTranslation> out;
  const double ty_abs = std::hypot(e[0], e[2]);
  if (ty_abs > 1e-10 * norm) {
    for (double sign : {1.0, -1.0}) {
      const double ty = sign * ty_abs;
      const double s = e[0] / ty;
      const double c = e[2] / ty;
      if (std::abs(tz * c - tx * s - e[3]) > tol ||
          std::abs(-tx * c - tz * s - e[4]) > tol) {
        continue;
      }
      out.push_back({std::atan2(s, c), Eigen::Vector3d(tx, ty, tz)});
    }
  } else {
    // t_y ~ 0: e4 = tz c - tx s, e5 = -tx c - tz s.
    Eigen::Matrix2d L;
    L << tz, -tx, -tx, -tz;
    if (std::abs(L.determinant()) > 1e-300) {
      const Eigen::Vector2d cs = L.inverse() * Eigen::Vector2d(e[3], e[4]);
      const double theta = std::atan2(cs[1], cs[0]);
      const double c = std::cos(theta), s = std::sin(theta);
      if (std::abs(tz * c - tx * s - e[3]) <= tol &&
          std::abs(-tx * c - tz * s - e[4]) <= tol) {
        out.push_back({theta, Eigen::Vector3d(tx, 0.0, tz)});
      }
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInconsistentPattern,
                "no yaw/translation reproduces the matrix");
  }
  return out;
}

VerticalSolveResult SolveVertical(const AffineCorrespondence& ac,
                                  const GravityAlignment& g_i,
                                  const GravityAlignment& g_j) {
  return SolveVerticalImpl(ac, g_i, g_j, true);
}

VerticalSolveResult SolveVerticalAllCandidates(const AffineCorrespondence& ac,
                                               const GravityAlignment& g_i,
                                               const GravityAlignment& g_j) {
  return SolveVerticalImpl(ac, g_i, g_j, false);
}

}  // namespace affpose
