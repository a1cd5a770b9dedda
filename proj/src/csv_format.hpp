#pragma once

#include <charconv>
#include <string>

namespace hcsnet {

// Shortest representation that parses back to the same double.
inline std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace hcsnet
