#pragma once

#include <cstdio>
#include <string>

namespace coinlab {

// 15 significant digits: reports stay diffable across platforms.
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v + 0.0);
  return buf;
}

// Value rounded to what fmt_num prints, for JSON output.
inline double round15(double v) { return std::stod(fmt_num(v)); }

}  // namespace coinlab
