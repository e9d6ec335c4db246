#ifndef HKFRAME_CSV_HPP
#define HKFRAME_CSV_HPP

#include <cstdio>
#include <string>

namespace hkframe {

/// Decimal float with 17 significant digits (round-trips IEEE-754 doubles).
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace hkframe

#endif
