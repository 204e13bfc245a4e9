#pragma once

// Deterministic number formatting. format_full round-trips doubles exactly
// (shortest representation); format_sig12 is the 12-significant-digit form
// used by report outputs.

#include <charconv>
#include <cstdio>
#include <string>

namespace strata {

inline std::string format_full(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

}  // namespace strata
