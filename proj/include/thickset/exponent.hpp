#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "thickset/error.hpp"

namespace thickset {

/// Lebesgue exponent p in [1, inf]. The infinite exponent follows the
/// conventions 1/p = 0 and (p-1)/p = 1 everywhere in the library.
class Exponent {
 public:
  explicit Exponent(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) {
      throw Error(ErrorCode::InvalidExponent, "p must lie in [1, inf], got " + std::to_string(p));
    }
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  /// Accepts a decimal number or "inf".
  static Exponent parse(const std::string& text);

  double value() const noexcept { return p_; }
  bool is_infinite() const noexcept { return std::isinf(p_); }
  double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / p_; }
  double conjugate_ratio() const noexcept { return is_infinite() ? 1.0 : (p_ - 1.0) / p_; }
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  double p_;
};

}  // namespace thickset
