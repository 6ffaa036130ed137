#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <string>

namespace stratree {

// Shortest decimal string that round-trips to the same double.
inline std::string format_shortest(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

inline std::string format_significant(double v, int digits) {
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, v == 0.0 ? 0.0 : v);
  return buf.data();
}

}  // namespace stratree
