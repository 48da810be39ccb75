#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "affpose/ac_io.h"
#include "affpose/error.h"
#include "affpose/geometry.h"
#include "affpose/planar_solvers.h"
#include "affpose/vertical_solver.h"
#include "oracles.h"

namespace affpose::cli {
namespace {

std::string Fixed(double value, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string Sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3e", value);
  return buffer;
}

std::string Deg(double rad) { return Fixed(RadToDeg(rad)); }

// Output stream that is either a file or the given fallback.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

double PlanarResidual(const PlanarMotion& motion, const AffineCorrespondence& ac) {
  const Eigen::Matrix3d E = PlanarEssential(motion.theta, motion.phi);
  const Eigen::Vector2d affine = AffineConstraintResidual(E, ac);
  return std::hypot(EpipolarResidual(E, ac.p_i, ac.p_j), affine.norm());
}

double PoseResidual(const RelativePose& pose, const AffineCorrespondence& ac) {
  const Eigen::Matrix3d E = EssentialFromPose(pose.R, pose.t);
  const Eigen::Vector2d affine = AffineConstraintResidual(E, ac);
  return std::hypot(EpipolarResidual(E, ac.p_i, ac.p_j), affine.norm());
}

// Picks the translation sign that puts the point in front of both cameras.
PlanarMotion Oriented(const PlanarMotion& m, const AffineCorrespondence& ac) {
  const Eigen::Vector3d ray_i = ac.p_i.Homogeneous(), ray_j = ac.p_j.Homogeneous();
  const PlanarMotion flipped = m.Flipped();
  return CheiralityMargin(PlanarMotionToPose(flipped), ray_i, ray_j) >
                 CheiralityMargin(PlanarMotionToPose(m), ray_i, ray_j)
             ? flipped
             : m;
}

std::string PoseText(const RelativePose& pose) {
  std::ostringstream s;
  s << "R=[";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) s << (r || c ? " " : "") << Fixed(pose.R(r, c));
  }
  s << "] t=[" << Fixed(pose.t.x()) << " " << Fixed(pose.t.y()) << " "
    << Fixed(pose.t.z()) << "]";
  return s.str();
}

void PrintCandidates(std::ostream& out, SolverId solver, std::size_t index,
                     const AffineCorrespondence& ac, const AcFile& file) {
  out << "ac " << index << "\n";
  switch (solver) {
    case SolverId::kPlanarClosedForm: {
      const PlanarMotion m =
          Oriented(SolvePlanarClosedForm(BuildPlanarSystem(ac)), ac);
      out << "  candidate 0: theta_deg=" << Deg(m.theta) << " phi_deg="
          << Deg(m.phi) << " residual=" << Sci(PlanarResidual(m, ac)) << "\n";
      break;
    }
    case SolverId::kPlanarLeastSquares: {
      const LeastSquaresSolution s = SolvePlanarLeastSquares(BuildPlanarSystem(ac));
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        const PlanarMotion m = Oriented(s.points[k].x.ToMotion(), ac);
        out << "  candidate " << k << ": theta_deg=" << Deg(m.theta)
            << " phi_deg=" << Deg(m.phi)
            << " objective=" << Sci(s.points[k].objective)
            << " residual=" << Sci(PlanarResidual(m, ac))
            << (k == s.best ? " minimum" : "") << "\n";
      }
      break;
    }
    case SolverId::kPlanarUnknownFocal: {
      const AffineCorrespondence centered =
          CenteredCorrespondences(
              AcFile{file.frame, file.intrinsics, {}, {}, {ac}, {}})
              .front();
      FocalSolveResult r = SolvePlanarUnknownFocal(centered);
      // Twin with the point in front of both cameras first.
      auto margin = [&](const FocalSolution& s) {
        const double g = s.inv_focal;
        return CheiralityMargin(
            PlanarMotionToPose(s.motion),
            {g * centered.p_i.u, g * centered.p_i.v, 1.0},
            {g * centered.p_j.u, g * centered.p_j.v, 1.0});
      };
      std::stable_sort(r.solutions.begin(), r.solutions.end(),
                       [&](const FocalSolution& a, const FocalSolution& b) {
                         return margin(a) > margin(b);
                       });
      for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        const FocalSolution& s = r.solutions[k];
        out << "  candidate " << k << ": theta_deg=" << Deg(s.motion.theta)
            << " phi_deg=" << Deg(s.motion.phi)
            << " focal_px=" << Fixed(s.focal)
            << " residual="
            << Sci(FocalSystemResiduals(centered, s.x.x, s.inv_focal)
                       .cwiseAbs()
                       .maxCoeff())
            << "\n";
      }
      break;
    }
    case SolverId::kVertical: {
      const VerticalSolveResult r =
          SolveVertical(ac, *file.gravity_i, *file.gravity_j);
      for (std::size_t k = 0; k < r.candidates.size(); ++k) {
        const auto& c = r.candidates[k];
        out << "  candidate " << k << ": " << PoseText(c.pose)
            << " margin=" << Sci(c.cheirality_margin)
            << " residual=" << Sci(PoseResidual(c.pose, ac)) << "\n";
      }
      break;
    }
  }
}

std::string ModelText(const Model& model) {
  if (const auto* m = std::get_if<PlanarMotion>(&model)) {
    return "theta_deg=" + Deg(m->theta) + " phi_deg=" + Deg(m->phi);
  }
  if (const auto* f = std::get_if<FocalSolution>(&model)) {
    return "theta_deg=" + Deg(f->motion.theta) + " phi_deg=" +
           Deg(f->motion.phi) + " focal_px=" + Fixed(f->focal);
  }
  return PoseText(std::get<RelativePose>(model));
}

struct Check {
  int total = 0;
  int failed = 0;
  int skipped = 0;
  double max_discrepancy = 0.0;
  std::vector<std::string> failures;

  void Record(bool ok, double discrepancy, const std::string& what) {
    ++total;
    max_discrepancy = std::max(max_discrepancy, discrepancy);
    if (!ok) {
      ++failed;
      failures.push_back(what);
    }
  }
};

SyntheticInstance OracleInstance(std::uint64_t seed, int index,
                                 MotionRegime regime, double pixel_sigma,
                                 std::size_t& pick) {
  std::mt19937_64 rng(DeriveSeed(seed, static_cast<std::uint64_t>(index), 0x0AC1E));
  MotionSpec motion;
  motion.regime = regime;
  NoiseConfig noise;
  noise.pixel_sigma = pixel_sigma;
  SyntheticInstance inst = GenerateInstance(SceneConfig{}, motion, noise, rng);
  pick = std::uniform_int_distribution<std::size_t>(0, inst.acs.size() - 1)(rng);
  return inst;
}

// Canonical (x, g) of a focal solution or oracle root.
Eigen::Matrix<double, 5, 1> FocalKey(const Eigen::Vector4d& x_in, double g) {
  Eigen::Vector4d x = x_in;
  if (x[3] < 0.0 || (x[3] == 0.0 && x[2] < 0.0)) x = -x;
  Eigen::Matrix<double, 5, 1> key;
  key << x, g;
  return key;
}

Check CheckPlanarClosedForm(const OracleOptions& o) {
  Check check;
  for (int i = 0; i < o.instances; ++i) {
    std::size_t pick = 0;
    const auto inst = OracleInstance(o.seed, i, MotionRegime::kPlanar, 1.0, pick);
    const PlanarSystem system = BuildPlanarSystem(inst.acs[pick]);
    PlanarMotion solved;
    try {
      solved = SolvePlanarClosedForm(system);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) throw;
      ++check.skipped;
      continue;
    }
    const PlanarMotion ref = oracle::PlanarRayleighMinimizer(system.C);
    const double d_theta = std::abs(CanonicalAngle(solved.theta - ref.theta));
    // The oracle may land on either sign of the eigenvector.
    const double d_phi = std::min(std::abs(CanonicalAngle(solved.phi - ref.phi)),
                                  std::abs(CanonicalAngle(solved.phi - ref.phi +
                                                          std::numbers::pi)));
    const double d = RadToDeg(std::max(d_theta, d_phi));
    check.Record(d < 1e-5, d, "instance " + std::to_string(i) + ": " + Sci(d) + " deg");
  }
  return check;
}

Check CheckPlanarLeastSquares(const OracleOptions& o) {
  Check check;
  for (int i = 0; i < o.instances; ++i) {
    std::size_t pick = 0;
    const auto inst = OracleInstance(o.seed, i, MotionRegime::kPlanar, 1.0, pick);
    const PlanarSystem system = BuildPlanarSystem(inst.acs[pick]);
    LeastSquaresSolution solved;
    try {
      solved = SolvePlanarLeastSquares(system);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) throw;
      ++check.skipped;
      continue;
    }
    const oracle::GridMinimum grid = oracle::PlanarGridMinimum(system.C, 0.05);
    const double excess = solved.minimum().objective - grid.objective;
    check.Record(excess <= 1e-6, std::max(0.0, excess),
                 "instance " + std::to_string(i) + ": solver " +
                     Sci(solved.minimum().objective) + " > grid " +
                     Sci(grid.objective));
  }
  return check;
}

Check CheckUnknownFocal(const OracleOptions& o) {
  Check check;
  for (int i = 0; i < o.instances; ++i) {
    std::size_t pick = 0;
    const auto inst = OracleInstance(o.seed, i, MotionRegime::kPlanar, 0.0, pick);
    const AffineCorrespondence centered =
        ToCenteredPixels(inst.acs[pick], inst.intrinsics);
    std::vector<Eigen::Matrix<double, 5, 1>> solver_keys;
    try {
      for (const auto& s : SolvePlanarUnknownFocal(centered).solutions) {
        const auto key = FocalKey(s.x.x, s.inv_focal);
        const bool twin = std::any_of(
            solver_keys.begin(), solver_keys.end(),
            [&](const auto& k) { return (k - key).norm() < 1e-9; });
        if (!twin) solver_keys.push_back(key);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput &&
          e.code() != ErrorCode::kNoRealSolution) {
        throw;
      }
    }
    std::vector<Eigen::Matrix<double, 5, 1>> oracle_keys;
    for (const auto& r : oracle::FocalGridRoots(centered)) {
      oracle_keys.push_back(FocalKey(
          Eigen::Vector4d(std::sin(r.alpha), std::cos(r.alpha), std::sin(r.phi),
                          std::cos(r.phi)),
          r.g));
    }
    // Every root of one set must appear in the other.
    double worst = 0.0;
    auto match = [&](const auto& a, const auto& b) {
      bool all = true;
      for (const auto& ka : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& kb : b) {
          Eigen::Matrix<double, 5, 1> d = ka - kb;
          d[4] /= std::max(ka[4], kb[4]);
          best = std::min(best, d.norm());
        }
        worst = std::max(worst, std::isfinite(best) ? best : 1.0);
        all = all && best < 1e-6;
      }
      return all;
    };
    const bool ok = match(solver_keys, oracle_keys) && match(oracle_keys, solver_keys);
    check.Record(ok, worst,
                 "instance " + std::to_string(i) + ": solver " +
                     std::to_string(solver_keys.size()) + " roots, oracle " +
                     std::to_string(oracle_keys.size()) + " roots, mismatch " +
                     Sci(worst));
  }
  return check;
}

Check CheckVertical(const OracleOptions& o) {
  Check check;
  for (int i = 0; i < o.instances; ++i) {
    std::size_t pick = 0;
    const auto inst = OracleInstance(o.seed, i, MotionRegime::kRandom, 1.0, pick);
    const auto& ac = inst.acs[pick];
    const AlignedSystem system =
        BuildAlignedSystem(ac, inst.measured_gravity_i, inst.measured_gravity_j);
    const Eigen::Matrix<double, 3, 6> M = oracle::AlignedSystemByEvaluation(
        ac, inst.measured_gravity_i, inst.measured_gravity_j);
    const double d_rows = (system.M - M).cwiseAbs().maxCoeff();
    check.Record(d_rows < 1e-12, d_rows,
                 "instance " + std::to_string(i) + ": aligned rows differ by " +
                     Sci(d_rows));

    const NullspaceParam basis = NullspaceBasis(system.M);
    const ConstraintSystem cs = BuildConstraintMatrix(basis);
    std::mt19937_64 rng(DeriveSeed(o.seed, static_cast<std::uint64_t>(i), 0xBE7A));
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double beta = coeff(rng), gamma = coeff(rng);
      const double d = (cs.Evaluate(beta, gamma) -
                        oracle::ConstraintsByEvaluation(basis, beta, gamma))
                           .cwiseAbs()
                           .maxCoeff();
      worst = std::max(worst, d);
    }
    check.Record(worst < 1e-9, worst,
                 "instance " + std::to_string(i) + ": expansion differs by " +
                     Sci(worst));
  }
  return check;
}

}  // namespace

int WorkerCount() {
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("AFFPOSE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "AFFPOSE_THREADS must be a positive integer");
    }
    workers = std::min<long>(workers, cap);
  }
  return workers;
}

int RunSolve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const AcFile file = ReadAcFile(options.input);
    if (file.acs.empty()) {
      err << "error: no correspondences in " << options.input << "\n";
      return kExitUsage;
    }
    if (options.solver == SolverId::kVertical &&
        (!file.gravity_i || !file.gravity_j)) {
      err << "error: missing alignment: vertical-1ac needs a 'gravity' line\n";
      return kExitUsage;
    }
    if (options.solver == SolverId::kPlanarUnknownFocal && !file.intrinsics) {
      err << "error: planar-unknown-f needs an 'intrinsics' line for the "
             "principal point\n";
      return kExitUsage;
    }
    Sink sink(options.out, out);
    std::ostream& o = sink.get();
    for (const auto& t : file.truth) o << "# truth " << t << "\n";

    // Calibrated solvers work on normalized coordinates; the unknown-focal
    // solver is handed centered pixels inside PrintCandidates.
    AcFile working = file;
    if (options.solver != SolverId::kPlanarUnknownFocal) {
      working.acs = NormalizedCorrespondences(file);
      working.frame = Frame::kNormalized;
    }
    o << "solver " << SolverName(options.solver) << "\n";
    int failures = 0;
    for (std::size_t k = 0; k < working.acs.size(); ++k) {
      try {
        PrintCandidates(o, options.solver, k, working.acs[k], working);
      } catch (const Error& e) {
        ++failures;
        o << "  failed: " << e.what() << "\n";
      }
    }
    if (working.acs.size() == 1) {
      if (failures) {
        err << "error: solver failed on the only correspondence\n";
        return kExitUsage;
      }
      return kExitOk;
    }

    // Robust selection over all correspondences; everything in normalized
    // coordinates, the focal length only rescales for the unknown-f solver.
    Priors priors;
    priors.intrinsics = file.intrinsics.value_or(Intrinsics{1.0, 0.0, 0.0});
    priors.gravity_i = file.gravity_i;
    priors.gravity_j = file.gravity_j;
    std::vector<AffineCorrespondence> normalized;
    if (options.solver == SolverId::kPlanarUnknownFocal &&
        file.frame == Frame::kPixel) {
      // Without a trusted focal length, express pixels in a unit-focal frame.
      priors.intrinsics.focal = 1.0;
      AcFile unit = file;
      unit.intrinsics = Intrinsics{1.0, file.intrinsics->cx, file.intrinsics->cy};
      normalized = NormalizedCorrespondences(unit);
    } else {
      normalized = NormalizedCorrespondences(file);
    }
    if (options.estimator == Estimator::kVoting) {
      if (options.solver != SolverId::kPlanarClosedForm) {
        err << "error: voting is defined for planar-cf only\n";
        return kExitUsage;
      }
      const VotingResult v = HistogramVoting(normalized, options.voting);
      o << "selection voting: " << ModelText(v.motion) << " peak=" << v.peak_count
        << "/" << v.num_votes << " bin_width_deg=" << Fixed(options.voting.bin_width_deg, 3)
        << "\n";
    } else {
      const RansacResult r = Ransac(options.solver, normalized, options.ransac, priors);
      o << "selection ransac: " << ModelText(r.model) << " inliers=" << r.score
        << "/" << normalized.size() << " threshold_px="
        << Fixed(options.ransac.threshold, 3)
        << " iterations=" << options.ransac.iterations
        << " seed=" << options.ransac.seed << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int RunSweepCommand(const SweepOptions& options, std::ostream& out,
                    std::ostream& err) {
  try {
    // Open outputs before computing so that a bad path fails fast.
    Sink table(options.out, out);
    std::unique_ptr<Sink> records;
    if (!options.records.empty()) records = std::make_unique<Sink>(options.records, out);
    const SweepResult result = RunSweep(options.spec);
    WriteSweepTable(table.get(), options.spec, result);
    if (records) WriteTrialRecords(records->get(), options.spec, result);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int RunOracleCheck(const OracleOptions& options, std::ostream& out,
                   std::ostream& err) {
  if (options.instances < 1) {
    err << "error: need at least one instance\n";
    return kExitUsage;
  }
  Check check;
  std::string what;
  try {
    switch (options.solver) {
      case SolverId::kPlanarClosedForm:
        what = "closed form vs Rayleigh-quotient grid search, 1 px noise";
        check = CheckPlanarClosedForm(options);
        break;
      case SolverId::kPlanarLeastSquares:
        what = "least-squares minimum vs 0.05 deg grid, 1 px noise";
        check = CheckPlanarLeastSquares(options);
        break;
      case SolverId::kPlanarUnknownFocal:
        what = "unknown-focal roots vs grid + Newton, noise-free";
        check = CheckUnknownFocal(options);
        break;
      case SolverId::kVertical:
        what = "aligned rows and constraint expansion vs direct evaluation";
        check = CheckVertical(options);
        break;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    Sink sink(options.out, out);
    std::ostream& o = sink.get();
    o << "oracle-check " << SolverName(options.solver) << ": " << what << "\n";
    o << "instances=" << options.instances << " seed=" << options.seed
      << " checks=" << check.total << " skipped_degenerate=" << check.skipped
      << " failed=" << check.failed
      << " max_discrepancy=" << Sci(check.max_discrepancy) << "\n";
    for (const auto& f : check.failures) o << "  mismatch " << f << "\n";
    o << (check.failed ? "FAIL" : "PASS") << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return check.failed ? kExitMismatch : kExitOk;
}

int RunSelftest(std::ostream& out, std::ostream& err) {
  bool ok = true;
  // Noise-free recovery by every solver on a handful of instances.
  for (SolverId solver : AllSolvers()) {
    double worst = 0.0;
    int skipped = 0;
    for (int i = 0; i < 20; ++i) {
      std::size_t pick = 0;
      const auto inst = OracleInstance(
          7, i,
          solver == SolverId::kVertical ? MotionRegime::kRandom
                                        : MotionRegime::kPlanar,
          0.0, pick);
      const auto& ac = inst.acs[pick];
      std::vector<RelativePose> poses;
      try {
        for (const Model& m : SolveHypotheses(solver, ac, inst.MakePriors())) {
          poses.push_back(ModelPose(m));
          if (std::holds_alternative<PlanarMotion>(m) ||
              std::holds_alternative<FocalSolution>(m)) {
            poses.push_back(ModelPose(
                PlanarMotion(std::get_if<PlanarMotion>(&m)
                                 ? std::get<PlanarMotion>(m).Flipped()
                                 : std::get<FocalSolution>(m).motion.Flipped())));
          }
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kDegenerateInput) {
          ++skipped;
          continue;
        }
        throw;
      }
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : poses) {
        best = std::min(best, std::max(RotationErrorDeg(inst.pose.R, p.R),
                                       TranslationErrorDeg(inst.pose.t, p.t)));
      }
      worst = std::max(worst, best);
    }
    const bool pass = worst < 1e-5;
    ok = ok && pass;
    out << (pass ? "PASS" : "FAIL") << " exactness " << SolverName(solver)
        << " worst_deg=" << Sci(worst) << " skipped=" << skipped << "\n";
  }
  for (SolverId solver : AllSolvers()) {
    OracleOptions o;
    o.solver = solver;
    o.instances = solver == SolverId::kPlanarClosedForm ? 2 : 5;
    o.seed = 11;
    std::ostringstream report;
    const int code = RunOracleCheck(o, report, err);
    ok = ok && code == kExitOk;
    out << (code == kExitOk ? "PASS" : "FAIL") << " oracle "
        << SolverName(solver) << "\n";
  }
  return ok ? kExitOk : kExitMismatch;
}

int RunGenerate(const GenerateOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    std::mt19937_64 rng(options.seed);
    MotionSpec motion;
    motion.regime = options.regime;
    NoiseConfig noise;
    noise.pixel_sigma = options.pixel_sigma;
    const SceneConfig scene;
    SyntheticInstance inst = GenerateInstance(scene, motion, noise, rng);
    if (options.outlier_fraction > 0.0) {
      InjectOutliers(inst, scene, options.outlier_fraction, rng);
    }
    AcFile file;
    file.intrinsics = inst.intrinsics;
    file.gravity_i = inst.measured_gravity_i;
    file.gravity_j = inst.measured_gravity_j;
    if (inst.planar) {
      file.truth.push_back("theta_deg=" + Fixed(RadToDeg(inst.planar->theta), 9) +
                           " phi_deg=" + Fixed(RadToDeg(inst.planar->phi), 9));
    }
    file.truth.push_back("focal_px=" + Fixed(inst.intrinsics.focal, 3));
    file.truth.push_back(PoseText(inst.pose));
    const std::size_t count =
        options.count <= 0 ? inst.acs.size()
                           : std::min<std::size_t>(options.count, inst.acs.size());
    for (std::size_t k = 0; k < count; ++k) {
      AffineCorrespondence ac = inst.acs[k];
      if (options.pixel_frame) {
        const ImagePoint pi = inst.intrinsics.ToPixel(ac.p_i);
        const ImagePoint pj = inst.intrinsics.ToPixel(ac.p_j);
        ac = MakeCorrespondence(pi.u, pi.v, pj.u, pj.v, ac.A, Frame::kPixel);
      }
      file.acs.push_back(ac);
    }
    file.frame = options.pixel_frame ? Frame::kPixel : Frame::kNormalized;
    Sink sink(options.out, out);
    sink.get() << "# affpose generate regime=" << MotionRegimeName(options.regime)
               << " seed=" << options.seed
               << " pixel_sigma=" << options.pixel_sigma
               << " outlier_fraction=" << options.outlier_fraction << "\n";
    WriteAcFile(sink.get(), file);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace affpose::cli
