#include "thickset/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "thickset/error.hpp"
#include "thickset/quadrature.hpp"

namespace thickset {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// sin(2πx) with the argument reduced to [-π/2, π/2] first
double sin_two_pi(double x) {
  const double k = std::round(2.0 * x);
  const double r = x - 0.5 * k;
  const double s = std::sin(kTwoPi * r);
  return std::fmod(std::abs(k), 2.0) == 1.0 ? -s : s;
}

double panel_for(const ExtremalInstance& instance) {
  return std::min(1.0, kTwoPi / (instance.b / 2.0)) / 8.0;
}

double power_integral(const ExtremalInstance& instance, double p, std::span<const Interval> pieces) {
  const auto nodes = quadrature::composite_nodes(pieces, panel_for(instance));
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    sum += nodes.w[i] * std::pow(std::abs(instance.normalized(nodes.x[i])), p);
  }
  return sum;
}

// log of 2 (2π)^{-mp} s^{mp} X^{1-mp} / (mp - 1): tail mass of |g|^p beyond |x| = X
// when |sin 2πx| <= s on the region considered.
double log_tail(double mp, double log_s, double x) {
  return std::log(2.0) - mp * std::log(kTwoPi) + mp * log_s + (1.0 - mp) * std::log(x) - std::log(mp - 1.0);
}

}  // namespace

double ExtremalInstance::normalized(double x) const {
  const double u = kTwoPi * x;
  double base;
  if (std::abs(x) < 1e-4) {
    const double u2 = u * u;
    base = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  } else {
    base = sin_two_pi(x) / u;
  }
  return std::pow(base, m);
}

double ExtremalInstance::value(double x) const { return std::pow(kTwoPi, m) * normalized(x); }

ExtremalInstance extremal_pair(double b, double gamma) {
  if (!(b >= 4.0 * kPi * (1.0 - 1e-12))) {
    throw Error(ErrorCode::BandTooSmall, "extremal family needs b >= 4π, got " + std::to_string(b));
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidGamma, "gamma must lie in (0, 1]");
  ExtremalInstance out{b, 0, gamma, two_sliver_set(gamma).translated(0.5)};
  out.m = std::max(1, static_cast<int>(std::floor(b / (4.0 * kPi) + 1e-12)));
  return out;
}

double example_exponent(double b) { return b / (4.0 * kPi) - 1.0; }

ExtremalRatio extremal_ratio(const ExtremalInstance& instance, Exponent p, std::optional<double> half_width) {
  if (p.is_infinite()) {
    // |g| peaks at 0 with value 1; on E the largest values sit next to ±1/2.
    const double x = half_width.value_or(4.0);
    double best = 0.0;
    for (const auto& piece : instance.set.clip(-x, x)) {
      best = std::max(best, quadrature::sup_on_interval([&](double y) { return std::abs(instance.normalized(y)); },
                                                        piece.lo, piece.hi, panel_for(instance)));
    }
    return {best, x, 0.0};
  }
  const double mp = static_cast<double>(instance.m) * p.value();
  if (!(mp > 1.0)) throw Error(ErrorCode::NonIntegrable, "|f|^p is not integrable on the line when mp <= 1");

  const double sin_on_set = instance.gamma < 0.5 ? std::sin(kPi * instance.gamma) : 1.0;
  double x = 2.0;
  if (half_width) {
    x = *half_width;
  } else {
    const Interval core{-2.0, 2.0};
    const double full_core = power_integral(instance, p.value(), std::span(&core, 1));
    const auto set_core = instance.set.clip(-2.0, 2.0);
    const double set_mass = power_integral(instance, p.value(), set_core);
    // smallest X with both tails below the target fraction of the core masses
    const double target_full = std::log(kExtremalTailTarget * full_core);
    const double target_set = std::log(kExtremalTailTarget * set_mass);
    const double lx_full = (log_tail(mp, 0.0, 1.0) - target_full) / (mp - 1.0);
    const double lx_set = (log_tail(mp, std::log(sin_on_set), 1.0) - target_set) / (mp - 1.0);
    x = std::clamp(std::ceil(std::exp(std::max(lx_full, lx_set))), 2.0, kExtremalMaxHalfWidth);
  }

  const Interval whole{-x, x};
  const double full = power_integral(instance, p.value(), std::span(&whole, 1));
  const double on_set = power_integral(instance, p.value(), instance.set.clip(-x, x));
  ExtremalRatio out;
  out.half_width = x;
  out.ratio = std::pow(on_set / full, 1.0 / p.value());
  out.tail_bound = std::max(std::exp(log_tail(mp, 0.0, x)) / full,
                            std::exp(log_tail(mp, std::log(sin_on_set), x)) / on_set);
  return out;
}

ExponentFit exponent_fit(std::span<const double> b_list, std::span<const double> gamma_list, Exponent p) {
  if (b_list.size() < 3 || gamma_list.size() < 3) {
    throw Error(ErrorCode::InsufficientData, "exponent fit needs at least 3 values of b and of gamma");
  }
  ExponentFit fit;
  fit.b_values.assign(b_list.begin(), b_list.end());
  fit.gamma_values.assign(gamma_list.begin(), gamma_list.end());
  std::vector<double> log_gamma;
  for (double g : gamma_list) log_gamma.push_back(std::log(g));
  std::vector<double> slopes;
  for (double b : b_list) {
    std::vector<double> row;
    std::vector<double> log_ratio;
    for (double g : gamma_list) {
      const double ratio = extremal_ratio(extremal_pair(b, g), p).ratio;
      row.push_back(ratio);
      log_ratio.push_back(std::log(ratio));
    }
    fit.per_b.push_back(fit_line(log_gamma, log_ratio));
    slopes.push_back(fit.per_b.back().slope);
    fit.ratios.push_back(std::move(row));
  }
  fit.slope_vs_b = fit_line(fit.b_values, slopes);
  return fit;
}

}  // namespace thickset
