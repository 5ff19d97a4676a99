#include "thickset/quadrature.hpp"

#include <numbers>

#include "thickset/error.hpp"

namespace thickset::quadrature {

Rule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess
    long double z = std::cos(std::numbers::pi_v<long double> * (static_cast<long double>(i) + 0.75L) /
                             (static_cast<long double>(n) + 0.5L));
    long double derivative = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L;
      long double p1 = 0.0L;
      for (std::size_t j = 1; j <= n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p2) / static_cast<long double>(j);
      }
      derivative = static_cast<long double>(n) * (z * p0 - p1) / (z * z - 1.0L);
      const long double step = p0 / derivative;
      z -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - z * z) * derivative * derivative);
    rule.nodes[i] = static_cast<double>(-z);
    rule.nodes[n - 1 - i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(w);
    rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

const Rule& default_rule() {
  static const Rule rule = gauss_legendre(kDefaultOrder);
  return rule;
}

NodeSet composite_nodes(std::span<const Interval> pieces, double max_panel, int order) {
  if (!(max_panel > 0.0)) throw Error(ErrorCode::InvalidArgument, "panel width must be positive");
  Rule owned;
  if (order != kDefaultOrder) owned = gauss_legendre(order);
  const Rule& use = order == kDefaultOrder ? default_rule() : owned;
  NodeSet out;
  for (const auto& piece : pieces) {
    if (!(piece.lo < piece.hi)) continue;
    const auto panels = std::max<long long>(1, static_cast<long long>(std::ceil(piece.length() / max_panel)));
    const double h = piece.length() / static_cast<double>(panels);
    for (long long k = 0; k < panels; ++k) {
      const double a = piece.lo + h * static_cast<double>(k);
      const double mid = a + 0.5 * h;
      for (std::size_t q = 0; q < use.nodes.size(); ++q) {
        out.x.push_back(mid + 0.5 * h * use.nodes[q]);
        out.w.push_back(0.5 * h * use.weights[q]);
      }
    }
  }
  return out;
}

}  // namespace thickset::quadrature
