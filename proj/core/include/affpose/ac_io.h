#ifndef AFFPOSE_AC_IO_H_
#define AFFPOSE_AC_IO_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affpose/types.h"

namespace affpose {

// Plain-text correspondence file:
//
//   # free-form comment
//   # truth <anything>            kept verbatim in AcFile::truth
//   frame normalized|pixel
//   intrinsics <f> <cx> <cy>
//   gravity <pitch_i> <roll_i> <pitch_j> <roll_j>    radians
//   u_i v_i u_j v_j a11 a12 a21 a22
//
// Header lines are optional and may appear in any order before the first
// data line. Pixel files hold raw image coordinates; the principal point from
// the intrinsics line centers them.
struct AcFile {
  Frame frame = Frame::kNormalized;
  std::optional<Intrinsics> intrinsics;
  std::optional<GravityAlignment> gravity_i;
  std::optional<GravityAlignment> gravity_j;
  // Correspondences exactly as stored (raw pixels for pixel files).
  std::vector<AffineCorrespondence> acs;
  std::vector<std::string> truth;
};

// Throws ParseError naming the offending line.
AcFile ReadAcFile(std::istream& in);
AcFile ReadAcFile(const std::string& path);

void WriteAcFile(std::ostream& out, const AcFile& file);

// Correspondences in the normalized frame. Pixel files need intrinsics.
std::vector<AffineCorrespondence> NormalizedCorrespondences(const AcFile& file);

// Correspondences in centered pixel coordinates. Normalized files need
// intrinsics; pixel files need at least the principal point.
std::vector<AffineCorrespondence> CenteredCorrespondences(const AcFile& file);

}  // namespace affpose

#endif  // AFFPOSE_AC_IO_H_
