#pragma once

#include <cstdio>
#include <string>
#include <string_view>

namespace harmgram {

// Chord tokens render with embedded commas, so every token field is quoted.
inline std::string csv_quote(std::string_view field) {
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Fixed-format doubles keep output byte-deterministic across runs.
inline std::string fmt_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

inline std::string fmt_sci(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", decimals, value);
  return buf;
}

}  // namespace harmgram
