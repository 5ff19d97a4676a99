#pragma once

#include <optional>
#include <span>
#include <vector>

#include "thickset/exponent.hpp"
#include "thickset/interval_set.hpp"
#include "thickset/regression.hpp"

namespace thickset {

/// f(x) = (sin(2πx)/x)^m with m = floor(b/4π), paired with the 1-periodic set
/// of two slivers of total measure γ around each half-integer (where sin 2πx vanishes).
struct ExtremalInstance {
  double b = 0.0;
  int m = 0;
  double gamma = 0.0;
  IntervalSet set;

  /// f(x) / (2π)^m = (sin(2πx) / (2πx))^m; equals 1 at x = 0.
  double normalized(double x) const;
  double value(double x) const;
};

ExtremalInstance extremal_pair(double b, double gamma);

struct ExtremalRatio {
  double ratio = 0.0;       // ‖f‖_{L^p(E∩[-X,X])} / ‖f‖_{L^p([-X,X])}
  double half_width = 0.0;  // X
  double tail_bound = 0.0;  // closed-form relative bound on the truncated mass
};

inline constexpr double kExtremalTailTarget = 1e-10;
inline constexpr double kExtremalMaxHalfWidth = 2e4;

/// Truncation chosen so that the discarded tail is at most 1e-10 of both the
/// full and the E-restricted mass (capped at 2e4; the achieved bound is reported).
ExtremalRatio extremal_ratio(const ExtremalInstance& instance, Exponent p,
                             std::optional<double> half_width = std::nullopt);

/// The example's exponent b/(4π) - 1.
double example_exponent(double b);

struct ExponentFit {
  std::vector<double> b_values;
  std::vector<double> gamma_values;
  std::vector<std::vector<double>> ratios;  // ratios[i][j] at (b_i, gamma_j)
  std::vector<LinearFit> per_b;             // log ratio against log gamma
  LinearFit slope_vs_b;                     // per-b slope against b
};

ExponentFit exponent_fit(std::span<const double> b_list, std::span<const double> gamma_list, Exponent p);

}  // namespace thickset
