#pragma once

#include <cstdio>
#include <string>

namespace kalikow {

/// Round-trip-exact decimal form of a double (17 significant digits).
inline std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace kalikow
