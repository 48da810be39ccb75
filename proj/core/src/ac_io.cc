#include "affpose/ac_io.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "affpose/error.h"

namespace affpose {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void Fail(int line, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + what);
}

std::vector<double> ReadNumbers(std::istringstream& in, int line,
                                std::size_t count) {
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) Fail(line, "expected a number");
  if (values.size() != count) {
    Fail(line, "expected " + std::to_string(count) + " numbers, got " +
                   std::to_string(values.size()));
  }
  for (double x : values) {
    if (!std::isfinite(x)) Fail(line, "non-finite value");
  }
  return values;
}

std::string Num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

AcFile ReadAcFile(std::istream& in) {
  AcFile file;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = Trim(raw);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const std::string body = Trim(text.substr(1));
      if (body.rfind("truth", 0) == 0) file.truth.push_back(Trim(body.substr(5)));
      continue;
    }
    std::istringstream fields(text);
    if (std::isalpha(static_cast<unsigned char>(text[0]))) {
      if (!file.acs.empty()) Fail(line, "header line after data");
      std::string key;
      fields >> key;
      if (key == "frame") {
        std::string value;
        fields >> value;
        if (value == "normalized") {
          file.frame = Frame::kNormalized;
        } else if (value == "pixel") {
          file.frame = Frame::kPixel;
        } else {
          Fail(line, "frame must be 'normalized' or 'pixel'");
        }
      } else if (key == "intrinsics") {
        const auto v = ReadNumbers(fields, line, 3);
        if (!(v[0] > 0.0)) Fail(line, "focal length must be positive");
        file.intrinsics = Intrinsics{v[0], v[1], v[2]};
      } else if (key == "gravity") {
        const auto v = ReadNumbers(fields, line, 4);
        file.gravity_i = GravityAlignment(v[0], v[1]);
        file.gravity_j = GravityAlignment(v[2], v[3]);
      } else {
        Fail(line, "unknown header '" + key + "'");
      }
      continue;
    }
    const auto v = ReadNumbers(fields, line, 8);
    Eigen::Matrix2d A;
    A << v[4], v[5], v[6], v[7];
    file.acs.push_back(MakeCorrespondence(v[0], v[1], v[2], v[3], A, file.frame));
  }
  return file;
}

AcFile ReadAcFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return ReadAcFile(in);
}

void WriteAcFile(std::ostream& out, const AcFile& file) {
  for (const auto& t : file.truth) out << "# truth " << t << "\n";
  out << "frame " << (file.frame == Frame::kPixel ? "pixel" : "normalized")
      << "\n";
  if (file.intrinsics) {
    out << "intrinsics " << Num(file.intrinsics->focal) << " "
        << Num(file.intrinsics->cx) << " " << Num(file.intrinsics->cy) << "\n";
  }
  if (file.gravity_i && file.gravity_j) {
    out << "gravity " << Num(file.gravity_i->pitch()) << " "
        << Num(file.gravity_i->roll()) << " " << Num(file.gravity_j->pitch())
        << " " << Num(file.gravity_j->roll()) << "\n";
  }
  for (const auto& ac : file.acs) {
    out << Num(ac.p_i.u) << " " << Num(ac.p_i.v) << " " << Num(ac.p_j.u) << " "
        << Num(ac.p_j.v) << " " << Num(ac.A(0, 0)) << " " << Num(ac.A(0, 1))
        << " " << Num(ac.A(1, 0)) << " " << Num(ac.A(1, 1)) << "\n";
  }
}

std::vector<AffineCorrespondence> NormalizedCorrespondences(const AcFile& file) {
  if (file.frame == Frame::kNormalized) return file.acs;
  if (!file.intrinsics) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel correspondences need an intrinsics line");
  }
  const Intrinsics& k = *file.intrinsics;
  std::vector<AffineCorrespondence> out;
  for (const auto& ac : file.acs) {
    out.push_back(MakeCorrespondence((ac.p_i.u - k.cx) / k.focal,
                                     (ac.p_i.v - k.cy) / k.focal,
                                     (ac.p_j.u - k.cx) / k.focal,
                                     (ac.p_j.v - k.cy) / k.focal, ac.A));
  }
  return out;
}

std::vector<AffineCorrespondence> CenteredCorrespondences(const AcFile& file) {
  if (!file.intrinsics) {
    throw Error(ErrorCode::kInvalidArgument,
                file.frame == Frame::kPixel
                    ? "pixel correspondences need the principal point"
                    : "normalized correspondences need an intrinsics line");
  }
  const Intrinsics& k = *file.intrinsics;
  std::vector<AffineCorrespondence> out;
  for (const auto& ac : file.acs) {
    if (file.frame == Frame::kPixel) {
      out.push_back(MakeCorrespondence(ac.p_i.u - k.cx, ac.p_i.v - k.cy,
                                       ac.p_j.u - k.cx, ac.p_j.v - k.cy, ac.A,
                                       Frame::kPixel));
    } else {
      out.push_back(MakeCorrespondence(k.focal * ac.p_i.u, k.focal * ac.p_i.v,
                                       k.focal * ac.p_j.u, k.focal * ac.p_j.v,
                                       ac.A, Frame::kPixel));
    }
  }
  return out;
}

}  // namespace affpose
