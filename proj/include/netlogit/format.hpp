#pragma once

#include <charconv>
#include <string>

namespace netlogit {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace netlogit
