#include "affpose/robust.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/vertical_solver.h"

namespace affpose {
namespace {

constexpr std::array<SolverId, 4> kAllSolvers = {
    SolverId::kPlanarClosedForm, SolverId::kPlanarLeastSquares,
    SolverId::kPlanarUnknownFocal, SolverId::kVertical};

AffineCorrespondence CenteredPixels(const AffineCorrespondence& ac, double f) {
  return MakeCorrespondence(f * ac.p_i.u, f * ac.p_i.v, f * ac.p_j.u,
                            f * ac.p_j.v, ac.A, Frame::kPixel);
}

// Fundamental matrix acting on pixel coordinates of the true camera. For a
// FocalSolution the centered pixels are interpreted with the estimated focal.
Eigen::Matrix3d PixelFundamental(const Model& model,
                                 const Intrinsics& intrinsics) {
  const RelativePose pose = ModelPose(model);
  const Eigen::Matrix3d E = CrossProductMatrix(pose.t) * pose.R;
  Intrinsics k = intrinsics;
  if (const auto* focal = std::get_if<FocalSolution>(&model)) {
    k.focal = focal->focal;
  }
  const Eigen::Matrix3d K_inv = k.K().inverse();
  return K_inv.transpose() * E * K_inv;
}

double PixelResidual(const Eigen::Matrix3d& F, const Eigen::Vector3d& x_i,
                     const Eigen::Vector3d& x_j, ResidualKind kind) {
  return kind == ResidualKind::kSampson ? SampsonDistance(F, x_i, x_j)
                                        : SymmetricEpipolarDistance(F, x_i, x_j);
}

double Cheirality(const Model& model, const AffineCorrespondence& ac) {
  return CheiralityMargin(ModelPose(model), ac.p_i.Homogeneous(),
                          ac.p_j.Homogeneous());
}

Model FlipTranslation(const Model& model) {
  if (const auto* motion = std::get_if<PlanarMotion>(&model)) {
    return motion->Flipped();
  }
  if (const auto* focal = std::get_if<FocalSolution>(&model)) {
    FocalSolution flipped = *focal;
    flipped.motion = focal->motion.Flipped();
    flipped.x.x = -focal->x.x;
    return flipped;
  }
  return model;
}

}  // namespace

std::string_view SolverName(SolverId id) {
  switch (id) {
    case SolverId::kPlanarClosedForm: return "planar-cf";
    case SolverId::kPlanarLeastSquares: return "planar-ls";
    case SolverId::kPlanarUnknownFocal: return "planar-unknown-f";
    case SolverId::kVertical: return "vertical-1ac";
  }
  return "unknown";
}

std::optional<SolverId> ParseSolverId(std::string_view name) {
  for (SolverId id : kAllSolvers) {
    if (SolverName(id) == name) return id;
  }
  return std::nullopt;
}

std::span<const SolverId> AllSolvers() { return kAllSolvers; }

std::string_view ResidualKindName(ResidualKind kind) {
  return kind == ResidualKind::kSampson ? "sampson" : "symmetric-epipolar";
}

std::optional<ResidualKind> ParseResidualKind(std::string_view name) {
  if (name == "sampson") return ResidualKind::kSampson;
  if (name == "symmetric-epipolar") return ResidualKind::kSymmetricEpipolar;
  return std::nullopt;
}

RelativePose ModelPose(const Model& model) {
  if (const auto* motion = std::get_if<PlanarMotion>(&model)) {
    return PlanarMotionToPose(*motion);
  }
  if (const auto* focal = std::get_if<FocalSolution>(&model)) {
    return PlanarMotionToPose(focal->motion);
  }
  return std::get<RelativePose>(model);
}

std::vector<Model> SolveHypotheses(SolverId solver,
                                   const AffineCorrespondence& ac,
                                   const Priors& priors) {
  std::vector<Model> models;
  switch (solver) {
    case SolverId::kPlanarClosedForm:
      models.emplace_back(SolvePlanarClosedForm(BuildPlanarSystem(ac)));
      break;
    case SolverId::kPlanarLeastSquares:
      models.emplace_back(SolvePlanarLeastSquares(BuildPlanarSystem(ac)).motion());
      break;
    case SolverId::kPlanarUnknownFocal: {
      // The two solutions are sign twins of the same essential matrix.
      const FocalSolveResult result = SolvePlanarUnknownFocal(
          CenteredPixels(ac, priors.intrinsics.focal));
      if (!result.solutions.empty()) models.emplace_back(result.solutions.front());
      break;
    }
    case SolverId::kVertical: {
      if (!priors.gravity_i || !priors.gravity_j) {
        throw Error(ErrorCode::kInvalidArgument,
                    "missing alignment: vertical-1ac needs pitch and roll of "
                    "both views");
      }
      for (const auto& c :
           SolveVertical(ac, *priors.gravity_i, *priors.gravity_j).candidates) {
        models.emplace_back(c.pose);
      }
      break;
    }
  }
  return models;
}

double SampsonDistance(const Eigen::Matrix3d& F, const Eigen::Vector3d& x_i,
                       const Eigen::Vector3d& x_j) {
  const Eigen::Vector3d l_j = F * x_i;
  const Eigen::Vector3d l_i = F.transpose() * x_j;
  const double r = x_j.dot(l_j);
  const double denom = l_j.head<2>().squaredNorm() + l_i.head<2>().squaredNorm();
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(r * r / denom);
}

double SymmetricEpipolarDistance(const Eigen::Matrix3d& F,
                                 const Eigen::Vector3d& x_i,
                                 const Eigen::Vector3d& x_j) {
  const Eigen::Vector3d l_j = F * x_i;
  const Eigen::Vector3d l_i = F.transpose() * x_j;
  const double r = x_j.dot(l_j);
  const double a = l_i.head<2>().squaredNorm();
  const double b = l_j.head<2>().squaredNorm();
  if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(r * r / a + r * r / b);
}

double ResidualPixels(const Model& model, const AffineCorrespondence& ac,
                      const Intrinsics& intrinsics, ResidualKind kind) {
  const Eigen::Matrix3d K = intrinsics.K();
  return PixelResidual(PixelFundamental(model, intrinsics),
                       K * ac.p_i.Homogeneous(), K * ac.p_j.Homogeneous(), kind);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return SplitMix64(SplitMix64(SplitMix64(seed) ^ a) ^ (b * 0xD1B54A32D192ED03ull));
}

std::size_t RansacSample(std::uint64_t seed, int iteration, std::size_t n) {
  std::mt19937_64 rng(DeriveSeed(seed, static_cast<std::uint64_t>(iteration)));
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

RansacResult Ransac(SolverId solver, std::span<const AffineCorrespondence> acs,
                    const RansacConfig& config, const Priors& priors) {
  if (acs.empty()) throw Error(ErrorCode::kEmptyInput, "no correspondences");
  if (!(config.threshold > 0.0) || config.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must be positive and iterations at least 1");
  }
  if (solver == SolverId::kVertical && (!priors.gravity_i || !priors.gravity_j)) {
    throw Error(ErrorCode::kInvalidArgument,
                "missing alignment: vertical-1ac needs pitch and roll of both "
                "views");
  }

  const std::size_t n = acs.size();
  const Eigen::Matrix3d K = priors.intrinsics.K();
  std::vector<Eigen::Vector3d> x_i(n), x_j(n);
  for (std::size_t k = 0; k < n; ++k) {
    x_i[k] = K * acs[k].p_i.Homogeneous();
    x_j[k] = K * acs[k].p_j.Homogeneous();
  }
  std::optional<RansacResult> best;
  int failed = 0;
  std::vector<double> residuals(n);
  for (int iter = 0; iter < config.iterations; ++iter) {
    const std::size_t sample = RansacSample(config.seed, iter, n);

    std::vector<Model> hypotheses;
    try {
      hypotheses = SolveHypotheses(solver, acs[sample], priors);
    } catch (const Error&) {
      ++failed;
      continue;
    }
    if (hypotheses.empty()) {
      ++failed;
      continue;
    }

    for (const Model& model : hypotheses) {
      const Eigen::Matrix3d F = PixelFundamental(model, priors.intrinsics);
      int score = 0;
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        residuals[k] = PixelResidual(F, x_i[k], x_j[k], config.residual);
        if (residuals[k] <= config.threshold) {
          ++score;
          sum += residuals[k];
        }
      }
      const double mean = score > 0 ? sum / score : 0.0;
      const bool better =
          !best || score > best->score ||
          (score == best->score && mean < best->mean_inlier_residual);
      if (!better) continue;
      RansacResult r;
      r.model = model;
      r.score = score;
      r.mean_inlier_residual = mean;
      r.best_iteration = iter;
      r.residuals = residuals;
      r.inliers.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        r.inliers[k] = residuals[k] <= config.threshold;
      }
      best = std::move(r);
    }
  }
  if (!best) {
    throw Error(ErrorCode::kAllIterationsFailed,
                "the solver failed on every sampled correspondence");
  }
  best->failed_iterations = failed;

  if (solver != SolverId::kVertical) {
    // Sampson scores cannot tell t from -t; the inliers' cheirality can.
    const Model flipped = FlipTranslation(best->model);
    int votes = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!best->inliers[k]) continue;
      const bool front = Cheirality(best->model, acs[k]) > 0.0;
      const bool front_flipped = Cheirality(flipped, acs[k]) > 0.0;
      votes += static_cast<int>(front) - static_cast<int>(front_flipped);
    }
    if (votes < 0) best->model = flipped;
  }
  return *best;
}

VotingResult HistogramVoting(std::span<const AffineCorrespondence> acs,
                             const VotingConfig& config) {
  if (acs.empty()) throw Error(ErrorCode::kEmptyInput, "no correspondences");
  const double bins_exact = 360.0 / config.bin_width_deg;
  const int bins = static_cast<int>(std::lround(bins_exact));
  if (!(config.bin_width_deg > 0.0) || bins < 1 ||
      std::abs(bins_exact - bins) > 1e-9 * bins_exact) {
    throw Error(ErrorCode::kInvalidArgument,
                "bin width must divide 360 degrees evenly");
  }
  auto bin_of = [&](double rad) {
    // (-180, 180] -> [0, bins)
    const double shifted = RadToDeg(rad) + 180.0;
    const int idx = static_cast<int>(std::ceil(shifted / config.bin_width_deg)) - 1;
    return std::clamp(idx, 0, bins - 1);
  };

  struct Vote {
    PlanarMotion motion;
    int theta_bin;
    int phi_bin;
  };
  std::vector<Vote> votes;
  votes.reserve(acs.size());
  for (const auto& ac : acs) {
    PlanarMotion motion;
    try {
      motion = SolvePlanarClosedForm(BuildPlanarSystem(ac));
    } catch (const Error&) {
      continue;
    }
    if (CheiralityMargin(PlanarMotionToPose(motion), ac.p_i.Homogeneous(),
                         ac.p_j.Homogeneous()) < 0.0) {
      motion = motion.Flipped();
    }
    votes.push_back({motion, bin_of(motion.theta), bin_of(motion.phi)});
  }
  if (votes.empty()) {
    throw Error(ErrorCode::kEmptyResult,
                "the closed-form solver failed on every correspondence");
  }

  std::map<std::pair<int, int>, int> histogram;
  for (const Vote& v : votes) ++histogram[{v.theta_bin, v.phi_bin}];
  // std::map iterates in bin order, so ties go to the lowest (theta, phi) bin.
  auto peak = histogram.begin();
  for (auto it = histogram.begin(); it != histogram.end(); ++it) {
    if (it->second > peak->second) peak = it;
  }

  VotingResult result;
  result.peak_count = peak->second;
  result.num_votes = static_cast<int>(votes.size());
  const auto [theta_bin, phi_bin] = peak->first;
  if (config.refinement == VotingRefinement::kMeanOfPeakBin) {
    double theta_sum = 0.0;
    double phi_sum = 0.0;
    for (const Vote& v : votes) {
      if (v.theta_bin != theta_bin || v.phi_bin != phi_bin) continue;
      theta_sum += v.motion.theta;
      phi_sum += v.motion.phi;
    }
    result.motion = PlanarMotion::Canonical(theta_sum / peak->second,
                                            phi_sum / peak->second);
  } else {
    auto center = [&](int bin) {
      return DegToRad(-180.0 + (bin + 0.5) * config.bin_width_deg);
    };
    result.motion = PlanarMotion::Canonical(center(theta_bin), center(phi_bin));
  }
  return result;
}

}  // namespace affpose
