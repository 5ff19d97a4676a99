#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include "thickset/interval_set.hpp"

namespace thickset::quadrature {

inline constexpr int kDefaultOrder = 16;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule gauss_legendre(int order);

/// Cached 16-point rule.
const Rule& default_rule();

/// Flattened nodes/weights of a composite rule over a list of intervals.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

/// Splits every interval into equal panels no wider than `max_panel` and
/// places `order` Gauss-Legendre nodes in each.
NodeSet composite_nodes(std::span<const Interval> pieces, double max_panel, int order = kDefaultOrder);

template <class Fn>
auto integrate(Fn&& fn, double lo, double hi, double max_panel, int order = kDefaultOrder) {
  using Result = std::invoke_result_t<Fn&, double>;
  const Interval piece{lo, hi};
  const auto nodes = composite_nodes(std::span(&piece, 1), max_panel, order);
  Result sum{};
  for (std::size_t i = 0; i < nodes.x.size(); ++i) sum += nodes.w[i] * fn(nodes.x[i]);
  return sum;
}

/// Golden-section maximization of a unimodal-ish `fn` on [lo, hi].
template <class Fn>
double golden_max(Fn&& fn, double lo, double hi, int iterations = 60) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  double best = std::max({fn(lo), fn(hi), fc, fd});
  for (int it = 0; it < iterations && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
      best = std::max(best, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
      best = std::max(best, fd);
    }
  }
  return best;
}

/// max of `magnitude` over [lo, hi]: uniform grid with spacing <= `spacing`,
/// endpoints included, then golden-section refinement around every grid local maximum.
template <class Fn>
double sup_on_interval(Fn&& magnitude, double lo, double hi, double spacing) {
  const auto steps = std::max<long long>(2, static_cast<long long>(std::ceil((hi - lo) / spacing)));
  const double h = (hi - lo) / static_cast<double>(steps);
  std::vector<double> values(static_cast<std::size_t>(steps) + 1);
  for (long long i = 0; i <= steps; ++i) {
    const double x = (i == steps) ? hi : lo + h * static_cast<double>(i);
    values[static_cast<std::size_t>(i)] = magnitude(x);
  }
  double best = *std::max_element(values.begin(), values.end());
  for (long long i = 1; i < steps; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (values[k] >= values[k - 1] && values[k] >= values[k + 1]) {
      const double a = lo + h * static_cast<double>(i - 1);
      const double b = lo + h * static_cast<double>(i + 1);
      best = std::max(best, golden_max(magnitude, a, b));
    }
  }
  return best;
}

}  // namespace thickset::quadrature
