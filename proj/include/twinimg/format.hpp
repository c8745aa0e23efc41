#pragma once

#include <cstdint>
#include <string>

namespace twinimg {

/// Pinned text form for table output: %.12g, with infinities spelled
/// "inf"/"-inf" and NaN "nan". Output files must be byte-stable.
std::string format_double(double v);

std::string format_int(std::int64_t v);

}  // namespace twinimg
