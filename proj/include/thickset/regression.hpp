#pragma once

#include <span>

namespace thickset {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept. Needs two distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace thickset
