// Versioned text serialization of spectral fields: one record per canonical
// half-space wavevector, doubles written with full round-trip precision.
#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "enscert/errors.hpp"
#include "enscert/format.hpp"
#include "enscert/spectral_field.hpp"

namespace enscert {

inline constexpr const char* kFieldFormatTag = "enscert-field/1";

// Layout:
//   format enscert-field/1
//   K <radius>
//   mode <kx> <ky> <kz> <re1> <im1> <re2> <im2> <re3> <im3>
//   ...
// Only canonical, nonzero modes appear; conjugate partners are implied.
inline void write_field(std::ostream& os, const SpectralField& u) {
  os << "format " << kFieldFormatTag << "\n";
  os << "K " << u.truncation_radius() << "\n";
  u.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
    if (abs2(c) == 0.0) return;
    os << "mode " << k[0] << " " << k[1] << " " << k[2];
    for (int i = 0; i < 3; ++i)
      os << " " << format_double(c[i].real()) << " " << format_double(c[i].imag());
    os << "\n";
  });
}

inline std::string field_to_string(const SpectralField& u) {
  std::ostringstream os;
  write_field(os, u);
  return os.str();
}

inline SpectralField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != std::string("format ") + kFieldFormatTag)
    throw malformed_field_error("field file: bad or missing format line");
  if (!std::getline(is, line))
    throw malformed_field_error("field file: missing K line");
  int K = 0;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> K) || tag != "K" || K < 1)
      throw malformed_field_error("field file: bad K line");
  }
  SpectralField u(K);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    Wavevector k;
    double re[3], im[3];
    if (!(ls >> tag >> k[0] >> k[1] >> k[2] >> re[0] >> im[0] >> re[1] >> im[1] >> re[2] >> im[2]) ||
        tag != "mode")
      throw malformed_field_error("field file: bad mode line: " + line);
    if (k.is_zero()) throw malformed_field_error("field file: mean mode must be absent");
    if (!k.is_canonical())
      throw malformed_field_error("field file: non-canonical wavevector in record");
    if (k.max_abs() > K) throw malformed_field_error("field file: mode outside K");
    u.set_coeff(k, Vec3c{Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[2], im[2])});
  }
  // Stored fields must be divergence-free; reject anything that is not.
  const double scale = std::sqrt(u.norms().energy / torus_volume()) + 1e-300;
  if (u.max_divergence() > 1e-10 * scale * 10.0 + 1e-13)
    throw malformed_field_error("field file: field is not divergence-free");
  return u;
}

inline SpectralField field_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_field(is);
}

}  // namespace enscert
