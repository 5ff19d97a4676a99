#include "thickset/exponent.hpp"

#include <cstdio>

namespace thickset {

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidExponent, "cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorCode::InvalidExponent, "trailing characters in '" + text + "'");
  return Exponent(value);
}

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p_);
  return buf;
}

}  // namespace thickset
