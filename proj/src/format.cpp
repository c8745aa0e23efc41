#include "twinimg/format.hpp"

#include <cmath>
#include <cstdio>

namespace twinimg {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

}  // namespace twinimg
