#include "affpose/synthetic.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include <Eigen/Dense>

#include "affpose/error.h"
#include "affpose/geometry.h"

namespace affpose {
namespace {

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

Eigen::Vector3d UnitVector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

std::string Num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

struct Motion {
  Eigen::Matrix3d R;
  Eigen::Vector3d t;  // scaled by the baseline
  GravityAlignment gravity_i;
  std::optional<PlanarMotion> planar;
};

Motion DrawMotion(const SceneConfig& scene, const MotionSpec& spec,
                  const NoiseConfig& noise, std::mt19937_64& rng) {
  Motion m;
  if (spec.regime == MotionRegime::kRandom) {
    const double tilt = DegToRad(spec.max_tilt_deg);
    m.R = RotationX(Uniform(rng, -tilt, tilt)) *
          RotationY(Uniform(rng, -tilt, tilt)) *
          RotationZ(Uniform(rng, -tilt, tilt));
    m.t = scene.baseline * UnitVector(rng);
    const double pr = DegToRad(spec.max_pitch_roll_deg);
    m.gravity_i = GravityAlignment(Uniform(rng, -pr, pr), Uniform(rng, -pr, pr));
    return m;
  }

  const double yaw = DegToRad(spec.max_yaw_deg);
  const double theta = Uniform(rng, -yaw, yaw);
  double phi = 0.0;
  switch (spec.regime) {
    case MotionRegime::kForward:
      phi = 0.0;
      break;
    case MotionRegime::kSideways:
      phi = (Uniform(rng, 0.0, 1.0) < 0.5 ? 1.0 : -1.0) * std::numbers::pi / 2;
      break;
    default:
      phi = Uniform(rng, -std::numbers::pi, std::numbers::pi);
      break;
  }
  const double sigma = DegToRad(noise.nonplanar_sigma_deg);
  const double dx = Gaussian(rng, sigma);
  const double dz = Gaussian(rng, sigma);
  const double dt = Gaussian(rng, sigma);

  const Eigen::Vector3d direction(std::sin(phi), 0.0, std::cos(phi));
  m.R = RotationX(dx) * RotationZ(dz) * RotationY(theta);
  m.t = scene.baseline * (RotationX(dt) * (-RotationY(theta) * direction));
  if (dx == 0.0 && dz == 0.0 && dt == 0.0) {
    m.planar = PlanarMotion::Canonical(theta, phi);
    m.planar->rho = scene.baseline;
  }
  return m;
}

Eigen::Vector2d Project(const Intrinsics& k, const Eigen::Vector3d& X) {
  return {k.focal * X.x() / X.z() + k.cx, k.focal * X.y() / X.z() + k.cy};
}

// Hartley normalization of a 2-D point set.
Eigen::Matrix3d NormalizingTransform(std::span<const Eigen::Vector2d> pts) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double mean = 0.0;
  for (const auto& p : pts) mean += (p - centroid).norm();
  mean /= static_cast<double>(pts.size());
  const double s = mean > 0.0 ? std::numbers::sqrt2 / mean : 1.0;
  Eigen::Matrix3d T;
  T << s, 0.0, -s * centroid.x(),
       0.0, s, -s * centroid.y(),
       0.0, 0.0, 1.0;
  return T;
}

}  // namespace

std::string_view MotionRegimeName(MotionRegime regime) {
  switch (regime) {
    case MotionRegime::kPlanar: return "planar";
    case MotionRegime::kForward: return "forward";
    case MotionRegime::kSideways: return "sideways";
    case MotionRegime::kRandom: return "random";
  }
  return "unknown";
}

std::optional<MotionRegime> ParseMotionRegime(std::string_view name) {
  for (auto r : {MotionRegime::kPlanar, MotionRegime::kForward,
                 MotionRegime::kSideways, MotionRegime::kRandom}) {
    if (MotionRegimeName(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view NoiseAxisName(NoiseAxis axis) {
  switch (axis) {
    case NoiseAxis::kImage: return "image";
    case NoiseAxis::kNonplanar: return "nonplanar";
    case NoiseAxis::kPitch: return "pitch";
    case NoiseAxis::kRoll: return "roll";
  }
  return "unknown";
}

std::optional<NoiseAxis> ParseNoiseAxis(std::string_view name) {
  for (auto a : {NoiseAxis::kImage, NoiseAxis::kNonplanar, NoiseAxis::kPitch,
                 NoiseAxis::kRoll}) {
    if (NoiseAxisName(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view EstimatorName(Estimator estimator) {
  return estimator == Estimator::kRansac ? "ransac" : "voting";
}

std::optional<Estimator> ParseEstimator(std::string_view name) {
  if (name == "ransac") return Estimator::kRansac;
  if (name == "voting") return Estimator::kVoting;
  return std::nullopt;
}

Priors SyntheticInstance::MakePriors() const {
  Priors priors;
  priors.intrinsics = intrinsics;
  priors.gravity_i = measured_gravity_i;
  priors.gravity_j = measured_gravity_j;
  return priors;
}

Eigen::Matrix3d HomographyDlt(std::span<const Eigen::Vector2d> src,
                              std::span<const Eigen::Vector2d> dst) {
  if (src.size() < 4 || src.size() != dst.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "homography needs at least 4 point pairs");
  }
  const Eigen::Matrix3d T_src = NormalizingTransform(src);
  const Eigen::Matrix3d T_dst = NormalizingTransform(dst);
  const int n = static_cast<int>(src.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 9);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d x = T_src * src[k].homogeneous();
    const Eigen::Vector3d y = T_dst * dst[k].homogeneous();
    A.block<1, 3>(2 * k, 3) = -y.z() * x.transpose();
    A.block<1, 3>(2 * k, 6) = y.y() * x.transpose();
    A.block<1, 3>(2 * k + 1, 0) = y.z() * x.transpose();
    A.block<1, 3>(2 * k + 1, 6) = -y.x() * x.transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d Hn;
  Hn << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
  const Eigen::Matrix3d H = T_dst.inverse() * Hn * T_src;
  return H / H.norm();
}

Eigen::Matrix2d AffineFromHomography(const Eigen::Matrix3d& H,
                                     const Eigen::Vector2d& p) {
  const Eigen::Vector3d x = H * p.homogeneous();
  const double s = x.z();
  if (!(std::abs(s) > 1e-12 * H.norm() * p.homogeneous().norm())) {
    throw Error(ErrorCode::kPointAtInfinity,
                "homography maps the point to infinity");
  }
  const Eigen::Vector2d q = x.head<2>() / s;
  Eigen::Matrix2d A;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) A(k, l) = (H(k, l) - q[k] * H(2, l)) / s;
  }
  return A;
}

AffineCorrespondence ToCenteredPixels(const AffineCorrespondence& ac,
                                      const Intrinsics& intrinsics) {
  const double f = intrinsics.focal;
  return MakeCorrespondence(f * ac.p_i.u, f * ac.p_i.v, f * ac.p_j.u,
                            f * ac.p_j.v, ac.A, Frame::kPixel);
}

SyntheticInstance GenerateInstance(const SceneConfig& scene,
                                   const MotionSpec& motion_spec,
                                   const NoiseConfig& noise,
                                   std::mt19937_64& rng) {
  if (!(scene.baseline > 0.0) || !(scene.intrinsics.focal > 0.0) ||
      scene.x_min > scene.x_max || scene.y_min > scene.y_max ||
      scene.z_min > scene.z_max || scene.width <= 0 || scene.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid scene configuration");
  }
  if (noise.pixel_sigma < 0.0 || noise.nonplanar_sigma_deg < 0.0 ||
      noise.pitch_sigma_deg < 0.0 || noise.roll_sigma_deg < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise levels must be >= 0");
  }

  const Motion motion = DrawMotion(scene, motion_spec, noise, rng);
  SyntheticInstance inst;
  inst.intrinsics = scene.intrinsics;
  inst.pose = RelativePose::Make(motion.R, motion.t);
  inst.translation_norm = motion.t.norm();
  inst.planar = motion.planar;
  inst.gravity_i = motion.gravity_i;
  const Eigen::Vector3d up_i = motion.gravity_i.R_imu().row(1).transpose();
  inst.gravity_j = GravityAlignment::FromVerticalDirection(motion.R * up_i);
  const double sp = DegToRad(noise.pitch_sigma_deg);
  const double sr = DegToRad(noise.roll_sigma_deg);
  inst.measured_gravity_i =
      GravityAlignment(inst.gravity_i.pitch() + Gaussian(rng, sp),
                       inst.gravity_i.roll() + Gaussian(rng, sr));
  inst.measured_gravity_j =
      GravityAlignment(inst.gravity_j.pitch() + Gaussian(rng, sp),
                       inst.gravity_j.roll() + Gaussian(rng, sr));

  const Intrinsics& k = scene.intrinsics;
  const Eigen::Vector3d center_j = -motion.R.transpose() * motion.t;
  const double min_cos =
      std::sqrt(std::max(0.0, 1.0 - scene.max_plane_ray_cos * scene.max_plane_ray_cos));
  auto in_image = [&](const Eigen::Vector2d& x) {
    return x.x() >= 0.0 && x.x() <= scene.width && x.y() >= 0.0 &&
           x.y() <= scene.height;
  };
  auto to_j = [&](const Eigen::Vector3d& X) -> Eigen::Vector3d {
    return motion.R * X + motion.t;
  };
  auto noisy = [&](const Eigen::Vector2d& x, bool apply) -> Eigen::Vector2d {
    if (!apply) return x;
    const double du = Gaussian(rng, noise.pixel_sigma);
    const double dv = Gaussian(rng, noise.pixel_sigma);
    return x + Eigen::Vector2d(du, dv);
  };

  // Emits one correspondence for the point X on the plane with unit normal n.
  auto try_emit = [&](const Eigen::Vector3d& X, const Eigen::Vector3d& n) {
    const Eigen::Vector3d b1 = n.unitOrthogonal();
    const Eigen::Vector3d b2 = n.cross(b1);
    std::array<Eigen::Vector3d, 5> pts;
    pts[0] = X;
    const double half = 0.5 * scene.patch_size;
    int q = 1;
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {1.0, -1.0}) {
        pts[q++] = X + half * (s1 * b1 + s2 * b2);
      }
    }
    std::array<Eigen::Vector2d, 5> xi, xj;
    for (int m = 0; m < 5; ++m) {
      const Eigen::Vector3d Xj = to_j(pts[m]);
      if (!(pts[m].z() > 1e-3) || !(Xj.z() > 1e-3)) return false;
      xi[m] = Project(k, pts[m]);
      xj[m] = Project(k, Xj);
    }
    for (int m = 0; m < 5; ++m) {
      const bool apply = m == 0 || scene.noise_aux_points;
      xi[m] = noisy(xi[m], apply);
      xj[m] = noisy(xj[m], apply);
    }
    if (!in_image(xi[0]) || !in_image(xj[0])) return false;
    const Eigen::Matrix3d H = HomographyDlt(std::span(xi).subspan(1),
                                            std::span(xj).subspan(1));
    Eigen::Matrix2d A;
    try {
      A = AffineFromHomography(H, xi[0]);
    } catch (const Error&) {
      return false;
    }
    if (!A.allFinite()) return false;
    const ImagePoint p_i = k.ToNormalized({xi[0].x(), xi[0].y(), Frame::kPixel});
    const ImagePoint p_j = k.ToNormalized({xj[0].x(), xj[0].y(), Frame::kPixel});
    inst.acs.push_back(MakeCorrespondence(p_i.u, p_i.v, p_j.u, p_j.v, A));
    inst.points.push_back(X);
    return true;
  };

  for (int p = 0; p < scene.num_ground_points; ++p) {
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= scene.max_retries) {
        throw Error(ErrorCode::kGenerationFailed,
                    "could not place a visible ground point");
      }
      const double x = Uniform(rng, scene.x_min, scene.x_max);
      const double z = Uniform(rng, scene.z_min, scene.z_max);
      if (std::abs(up_i.y()) < 1e-6) continue;
      const double y = (scene.ground_height - up_i.x() * x - up_i.z() * z) / up_i.y();
      if (try_emit({x, y, z}, up_i)) break;
    }
  }
  for (int p = 0; p < scene.num_random_planes; ++p) {
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= scene.max_retries) {
        throw Error(ErrorCode::kGenerationFailed,
                    "could not place a visible point on a random plane");
      }
      const Eigen::Vector3d X(Uniform(rng, scene.x_min, scene.x_max),
                              Uniform(rng, scene.y_min, scene.y_max),
                              Uniform(rng, scene.z_min, scene.z_max));
      const Eigen::Vector3d n = UnitVector(rng);
      const double cos_i = std::abs(n.dot(X.normalized()));
      const double cos_j = std::abs(n.dot((X - center_j).normalized()));
      if (cos_i < min_cos || cos_j < min_cos) continue;
      if (try_emit(X, n)) break;
    }
  }
  return inst;
}

std::vector<bool> InjectOutliers(SyntheticInstance& instance,
                                 const SceneConfig& scene, double fraction,
                                 std::mt19937_64& rng) {
  if (!(fraction >= 0.0) || fraction > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "outlier fraction must be in [0, 1]");
  }
  const std::size_t n = instance.acs.size();
  const auto count = static_cast<std::size_t>(std::lround(fraction * n));
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> mask(n, false);
  const Intrinsics& k = scene.intrinsics;
  for (std::size_t m = 0; m < count; ++m) {
    const std::size_t idx = order[m];
    mask[idx] = true;
    const ImagePoint p_i = k.ToNormalized(
        {Uniform(rng, 0.0, scene.width), Uniform(rng, 0.0, scene.height), Frame::kPixel});
    const ImagePoint p_j = k.ToNormalized(
        {Uniform(rng, 0.0, scene.width), Uniform(rng, 0.0, scene.height), Frame::kPixel});
    Eigen::Matrix2d A;
    A << Uniform(rng, -2.0, 2.0), Uniform(rng, -2.0, 2.0),
        Uniform(rng, -2.0, 2.0), Uniform(rng, -2.0, 2.0);
    instance.acs[idx] = MakeCorrespondence(p_i.u, p_i.v, p_j.u, p_j.v, A);
  }
  return mask;
}

QuintileRmse ComputeQuintileRmse(std::span<const TrialRecord> records) {
  std::vector<double> r, t;
  for (const auto& rec : records) {
    if (rec.failed) continue;
    r.push_back(rec.eps_R_deg);
    t.push_back(rec.eps_t_deg);
  }
  if (r.empty()) throw Error(ErrorCode::kEmptyInput, "no successful trials");
  const std::size_t keep = std::max<std::size_t>(1, 2 * r.size() / 5);
  auto rmse = [keep](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < keep; ++k) sum += v[k] * v[k];
    return std::sqrt(sum / static_cast<double>(keep));
  };
  QuintileRmse out;
  out.eps_R = rmse(r);
  out.eps_t = rmse(t);
  out.kept = static_cast<int>(keep);
  return out;
}

NoiseConfig NoiseForLevel(const SweepSpec& spec, double level) {
  NoiseConfig noise;
  noise.pixel_sigma = spec.axis == NoiseAxis::kImage ? level : spec.fixed_pixel_sigma;
  if (spec.axis == NoiseAxis::kNonplanar) noise.nonplanar_sigma_deg = level;
  if (spec.axis == NoiseAxis::kPitch) noise.pitch_sigma_deg = level;
  if (spec.axis == NoiseAxis::kRoll) noise.roll_sigma_deg = level;
  return noise;
}

namespace {

std::uint64_t TrialSeed(const SweepSpec& spec, int level_index, int trial) {
  return DeriveSeed(spec.seed, static_cast<std::uint64_t>(level_index),
                    static_cast<std::uint64_t>(trial));
}

TrialRecord Estimate(const SweepSpec& spec, const SyntheticInstance& inst,
                     SolverId solver, TrialRecord rec) {
  rec.solver = solver;
  try {
    Model model;
    if (spec.estimator == Estimator::kVoting) {
      model = HistogramVoting(inst.acs, spec.voting).motion;
    } else {
      RansacConfig config = spec.ransac;
      config.seed = DeriveSeed(rec.seed, 0x52414e53ull);
      model = Ransac(solver, inst.acs, config, inst.MakePriors()).model;
    }
    rec.estimate = ModelPose(model);
    if (const auto* focal = std::get_if<FocalSolution>(&model)) {
      rec.focal = focal->focal;
    }
    rec.eps_R_deg = RotationErrorDeg(rec.truth.R, rec.estimate.R);
    rec.eps_t_deg = TranslationErrorDeg(rec.truth.t, rec.estimate.t);
  } catch (const Error& e) {
    rec.failed = true;
    rec.failure = e.what();
  }
  return rec;
}

std::vector<TrialRecord> RunTrialAllSolvers(const SweepSpec& spec,
                                            int level_index, int trial) {
  TrialRecord base;
  base.level_index = level_index;
  base.level = spec.levels[level_index];
  base.trial = trial;
  base.seed = TrialSeed(spec, level_index, trial);

  std::vector<TrialRecord> out;
  std::mt19937_64 rng(base.seed);
  SyntheticInstance inst;
  try {
    inst = GenerateInstance(spec.scene, spec.motion,
                            NoiseForLevel(spec, base.level), rng);
  } catch (const Error& e) {
    for (SolverId solver : spec.solvers) {
      TrialRecord rec = base;
      rec.solver = solver;
      rec.failed = true;
      rec.failure = e.what();
      out.push_back(rec);
    }
    return out;
  }
  base.truth = inst.pose;
  for (SolverId solver : spec.solvers) out.push_back(Estimate(spec, inst, solver, base));
  return out;
}

void ValidateSpec(const SweepSpec& spec) {
  if (spec.solvers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no solver selected");
  }
  if (spec.levels.empty()) throw Error(ErrorCode::kInvalidArgument, "no levels");
  for (double level : spec.levels) {
    if (!(level >= 0.0) || !std::isfinite(level)) {
      throw Error(ErrorCode::kInvalidArgument, "noise levels must be >= 0");
    }
  }
  if (spec.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  }
  if (spec.estimator == Estimator::kVoting) {
    for (SolverId s : spec.solvers) {
      if (s != SolverId::kPlanarClosedForm) {
        throw Error(ErrorCode::kInvalidArgument,
                    "histogram voting is defined for planar-cf only");
      }
    }
  }
  if (!(spec.ransac.threshold > 0.0) || spec.ransac.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must be positive and iterations at least 1");
  }
}

}  // namespace

TrialRecord RunTrial(const SweepSpec& spec, int level_index, int trial,
                     SolverId solver) {
  SweepSpec single = spec;
  single.solvers = {solver};
  return RunTrialAllSolvers(single, level_index, trial).front();
}

SweepResult RunSweep(const SweepSpec& spec) {
  ValidateSpec(spec);
  const int n_levels = static_cast<int>(spec.levels.size());
  const int n_solvers = static_cast<int>(spec.solvers.size());
  const int n_tasks = n_levels * spec.trials;

  // slots[task] holds the records of all solvers for one (level, trial).
  std::vector<std::vector<TrialRecord>> slots(n_tasks);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < n_tasks; task = next++) {
      slots[task] = RunTrialAllSolvers(spec, task / spec.trials, task % spec.trials);
    }
  };
  const int threads = std::clamp(spec.threads, 1, std::max(1, n_tasks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.records.reserve(static_cast<std::size_t>(n_tasks) * n_solvers);
  for (int l = 0; l < n_levels; ++l) {
    for (int s = 0; s < n_solvers; ++s) {
      std::vector<TrialRecord> group;
      group.reserve(spec.trials);
      for (int t = 0; t < spec.trials; ++t) {
        group.push_back(slots[l * spec.trials + t][s]);
      }
      SweepRow row;
      row.level = spec.levels[l];
      row.solver = spec.solvers[s];
      row.n_trials = spec.trials;
      row.n_failed = static_cast<int>(std::count_if(
          group.begin(), group.end(), [](const TrialRecord& r) { return r.failed; }));
      if (row.n_failed < row.n_trials) {
        const QuintileRmse q = ComputeQuintileRmse(group);
        row.eps_R_rmse_deg = q.eps_R;
        row.eps_t_rmse_deg = q.eps_t;
      } else {
        row.eps_R_rmse_deg = row.eps_t_rmse_deg =
            std::numeric_limits<double>::quiet_NaN();
      }
      result.rows.push_back(row);
      result.records.insert(result.records.end(), group.begin(), group.end());
    }
  }
  return result;
}

namespace {

void WriteHeader(std::ostream& out, const SweepSpec& spec, std::string_view kind) {
  out << "# affpose " << kind << "\n";
  out << "# solvers=";
  for (std::size_t k = 0; k < spec.solvers.size(); ++k) {
    out << (k ? "," : "") << SolverName(spec.solvers[k]);
  }
  out << "\n# regime=" << MotionRegimeName(spec.motion.regime) << "\n";
  out << "# noise_axis=" << NoiseAxisName(spec.axis) << "\n";
  out << "# levels=";
  for (std::size_t k = 0; k < spec.levels.size(); ++k) {
    out << (k ? "," : "") << Num(spec.levels[k]);
  }
  out << "\n# trials=" << spec.trials << "\n";
  out << "# seed=" << spec.seed << "\n";
  out << "# fixed_pixel_sigma=" << Num(spec.fixed_pixel_sigma) << "\n";
  out << "# estimator=" << EstimatorName(spec.estimator) << "\n";
  out << "# threshold_px=" << Num(spec.ransac.threshold) << "\n";
  out << "# iterations=" << spec.ransac.iterations << "\n";
  out << "# residual=" << ResidualKindName(spec.ransac.residual) << "\n";
  out << "# bin_width_deg=" << Num(spec.voting.bin_width_deg) << "\n";
  out << "# voting_refinement="
      << (spec.voting.refinement == VotingRefinement::kMeanOfPeakBin
              ? "mean-of-peak-bin"
              : "none")
      << "\n";
  const SceneConfig& s = spec.scene;
  out << "# scene: ground_points=" << s.num_ground_points
      << " random_planes=" << s.num_random_planes << " x=[" << Num(s.x_min)
      << "," << Num(s.x_max) << "] y=[" << Num(s.y_min) << "," << Num(s.y_max)
      << "] z=[" << Num(s.z_min) << "," << Num(s.z_max)
      << "] ground_height=" << Num(s.ground_height)
      << " baseline=" << Num(s.baseline) << " image=" << s.width << "x"
      << s.height << " focal=" << Num(s.intrinsics.focal) << " principal=("
      << Num(s.intrinsics.cx) << "," << Num(s.intrinsics.cy)
      << ") max_plane_ray_cos=" << Num(s.max_plane_ray_cos)
      << " patch_size=" << Num(s.patch_size)
      << " noise_aux_points=" << (s.noise_aux_points ? "true" : "false") << "\n";
  out << "# motion: max_yaw_deg=" << Num(spec.motion.max_yaw_deg)
      << " max_tilt_deg=" << Num(spec.motion.max_tilt_deg)
      << " max_pitch_roll_deg=" << Num(spec.motion.max_pitch_roll_deg) << "\n";
  out << "# aggregation: rmse over the lowest 40% of each error, eps_R and "
         "eps_t sorted independently; failed trials excluded\n";
  out << "# translation_error: sign-aware angle\n";
}

}  // namespace

void WriteSweepTable(std::ostream& out, const SweepSpec& spec,
                     const SweepResult& result) {
  WriteHeader(out, spec, "sweep");
  out << "level\tsolver\tn_trials\tn_failed\teps_R_rmse_deg\teps_t_rmse_deg\n";
  for (const SweepRow& row : result.rows) {
    out << Num(row.level) << '\t' << SolverName(row.solver) << '\t'
        << row.n_trials << '\t' << row.n_failed << '\t'
        << Num(row.eps_R_rmse_deg) << '\t' << Num(row.eps_t_rmse_deg) << '\n';
  }
}

void WriteTrialRecords(std::ostream& out, const SweepSpec& spec,
                       const SweepResult& result) {
  WriteHeader(out, spec, "trials");
  out << "level\tsolver\ttrial\tseed\tfailed\teps_R_deg\teps_t_deg\tfocal\t"
         "failure\n";
  for (const TrialRecord& r : result.records) {
    out << Num(r.level) << '\t' << SolverName(r.solver) << '\t' << r.trial
        << '\t' << r.seed << '\t' << (r.failed ? 1 : 0) << '\t'
        << Num(r.eps_R_deg) << '\t' << Num(r.eps_t_deg) << '\t' << Num(r.focal)
        << '\t' << (r.failed ? r.failure : "-") << '\n';
  }
}

}  // namespace affpose
