#pragma once

// Small text helpers shared by the CSV, mesh and config readers/writers.

#include <cstdio>
#include <string>
#include <string_view>

namespace bernoulli::detail {

// Shortest-round-trip-safe representation.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace bernoulli::detail
