#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "thickset/error.hpp"

namespace testing {

/// The error code thrown by fn, or nothing when it returns normally.
template <class Fn>
std::optional<thickset::ErrorCode> error_code(Fn&& fn) {
  try {
    fn();
  } catch (const thickset::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace testing

#define CHECK_ERROR(expr, code) CHECK(testing::error_code([&] { (void)(expr); }) == thickset::ErrorCode::code)
