// Deterministic double formatting for all text outputs.
#pragma once

#include <cstdio>
#include <string>

namespace enscert {

// %.17g round-trips every finite double exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace enscert
