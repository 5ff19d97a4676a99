#include "thickset/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thickset/error.hpp"

namespace thickset {
namespace {

constexpr double kMergeTolerance = 1e-12;

void check_finite_pairs(const std::vector<Interval>& raw) {
  for (const auto& iv : raw) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
      throw Error(ErrorCode::InvalidInterval,
                  "interval (" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + ") needs lo < hi");
    }
  }
}

std::vector<Interval> merge_sorted(std::vector<Interval> raw) {
  std::sort(raw.begin(), raw.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  merged.reserve(raw.size());
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kMergeTolerance) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

// Measure of the cell intersected with [0, y], 0 <= y <= L.
double partial_cell_measure(const std::vector<Interval>& cell, double y) {
  double total = 0.0;
  for (const auto& iv : cell) {
    if (iv.lo >= y) break;
    total += std::min(iv.hi, y) - iv.lo;
  }
  return total;
}

// Measure of the periodic set intersected with [0, x) for any real x (negative x gives a negative value).
double periodic_cumulative(const IntervalSet& set, double x) {
  const double period = *set.period();
  const double cells = std::floor(x / period);
  double offset = x - cells * period;
  offset = std::clamp(offset, 0.0, period);
  return cells * set.cell_measure() + partial_cell_measure(set.intervals(), offset);
}

}  // namespace

IntervalSet IntervalSet::normalize(std::vector<Interval> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptySet, "no intervals given");
  check_finite_pairs(raw);
  return IntervalSet(merge_sorted(std::move(raw)), std::nullopt);
}

IntervalSet IntervalSet::periodic(std::vector<Interval> raw, double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::InvalidArgument, "period must be positive, got " + std::to_string(period));
  }
  if (raw.empty()) throw Error(ErrorCode::EmptySet, "no intervals given");
  check_finite_pairs(raw);
  std::vector<Interval> wrapped;
  for (const auto& iv : raw) {
    if (iv.length() >= period) {
      wrapped = {{0.0, period}};
      break;
    }
    const double shift = std::floor(iv.lo / period) * period;
    const double lo = iv.lo - shift;
    const double hi = iv.hi - shift;
    if (hi <= period) {
      wrapped.push_back({lo, hi});
    } else {
      wrapped.push_back({lo, period});
      wrapped.push_back({0.0, hi - period});
    }
  }
  auto merged = merge_sorted(std::move(wrapped));
  // drop slivers produced by wrapping round-off
  std::erase_if(merged, [](const Interval& iv) { return iv.length() <= kMergeTolerance; });
  if (merged.empty()) throw Error(ErrorCode::EmptySet, "periodic cell is empty after wrapping");
  return IntervalSet(std::move(merged), period);
}

double IntervalSet::cell_measure() const noexcept {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

IntervalSet IntervalSet::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({iv.lo * factor, iv.hi * factor});
  if (period_) return IntervalSet(std::move(out), *period_ * factor);
  return IntervalSet(std::move(out), std::nullopt);
}

IntervalSet IntervalSet::translated(double shift) const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({iv.lo + shift, iv.hi + shift});
  if (period_) return periodic(std::move(out), *period_);
  return IntervalSet(std::move(out), std::nullopt);
}

std::vector<Interval> IntervalSet::clip(double lo, double hi) const {
  std::vector<Interval> out;
  if (!(lo < hi)) return out;
  if (!period_) {
    for (const auto& iv : intervals_) {
      const double a = std::max(lo, iv.lo);
      const double b = std::min(hi, iv.hi);
      if (a < b) out.push_back({a, b});
    }
    return out;
  }
  const double period = *period_;
  const auto first = static_cast<long long>(std::floor(lo / period));
  const auto last = static_cast<long long>(std::floor(hi / period));
  for (long long cell = first; cell <= last; ++cell) {
    const double base = static_cast<double>(cell) * period;
    for (const auto& iv : intervals_) {
      const double a = std::max(lo, base + iv.lo);
      const double b = std::min(hi, base + iv.hi);
      if (a < b) out.push_back({a, b});
    }
  }
  return merge_sorted(std::move(out));
}

double measure_within(const IntervalSet& set, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidWindow, "window needs lo < hi");
  if (set.is_periodic()) {
    const double m = periodic_cumulative(set, hi) - periodic_cumulative(set, lo);
    return std::clamp(m, 0.0, hi - lo);
  }
  double total = 0.0;
  for (const auto& iv : set.intervals()) {
    const double a = std::max(lo, iv.lo);
    const double b = std::min(hi, iv.hi);
    if (a < b) total += b - a;
  }
  return total;
}

ThicknessCertificate thickness(const IntervalSet& set, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidWindow, "window length must be positive");
  if (!set.is_periodic()) {
    throw Error(ErrorCode::InvalidWindow, "thickness of a non-periodic set needs an explicit domain");
  }
  const double period = *set.period();
  auto wrap = [period](double t) {
    const double r = t - std::floor(t / period) * period;
    return r >= period ? 0.0 : r;
  };
  // |E ∩ (t, t+a)| is piecewise linear in t; kinks occur where t or t+a meets an endpoint.
  std::vector<double> breakpoints{0.0};
  for (const auto& iv : set.intervals()) {
    for (double e : {iv.lo, iv.hi}) {
      breakpoints.push_back(wrap(e));
      breakpoints.push_back(wrap(e - a));
    }
  }
  double worst = a;
  for (double t : breakpoints) worst = std::min(worst, measure_within(set, t, t + a));
  return {a, std::clamp(worst / a, 0.0, 1.0)};
}

ThicknessCertificate thickness(const IntervalSet& set, double a, Interval domain) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidWindow, "window length must be positive");
  if (domain.length() < a) throw Error(ErrorCode::InvalidWindow, "domain shorter than the window");
  const double t_lo = domain.lo;
  const double t_hi = domain.hi - a;
  std::vector<double> breakpoints{t_lo, t_hi};
  auto add = [&](double t) {
    if (t > t_lo && t < t_hi) breakpoints.push_back(t);
  };
  const auto pieces = set.clip(domain.lo - a, domain.hi + a);
  for (const auto& iv : pieces) {
    for (double e : {iv.lo, iv.hi}) {
      add(e);
      add(e - a);
    }
  }
  double worst = a;
  for (double t : breakpoints) worst = std::min(worst, measure_within(set, t, t + a));
  return {a, std::clamp(worst / a, 0.0, 1.0)};
}

IntervalSet two_sliver_set(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidGamma, "gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  return IntervalSet::periodic({{0.0, gamma / 2.0}, {1.0 - gamma / 2.0, 1.0}}, 1.0);
}

IntervalSet unite(const IntervalSet& first, const IntervalSet& second) {
  if (first.period() != second.period()) {
    throw Error(ErrorCode::InvalidArgument, "cannot unite sets with different periodicity");
  }
  std::vector<Interval> all = first.intervals();
  all.insert(all.end(), second.intervals().begin(), second.intervals().end());
  if (first.is_periodic()) return IntervalSet::periodic(std::move(all), *first.period());
  return IntervalSet::normalize(std::move(all));
}

IntervalSet on_torus(const IntervalSet& set, double period) {
  auto cell = set.clip(0.0, period);
  if (cell.empty()) throw Error(ErrorCode::EmptySet, "set does not meet [0, L)");
  return IntervalSet::periodic(std::move(cell), period);
}

nlohmann::json to_json(const IntervalSet& set) {
  nlohmann::json doc;
  doc["period"] = set.period() ? nlohmann::json(*set.period()) : nlohmann::json(nullptr);
  auto list = nlohmann::json::array();
  for (const auto& iv : set.intervals()) list.push_back({iv.lo, iv.hi});
  doc["intervals"] = std::move(list);
  return doc;
}

IntervalSet interval_set_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("intervals") || !doc["intervals"].is_array()) {
    throw Error(ErrorCode::Config, "interval set needs an \"intervals\" array");
  }
  std::vector<Interval> raw;
  for (const auto& pair : doc["intervals"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error(ErrorCode::Config, "each interval must be a [lo, hi] pair of numbers");
    }
    raw.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  if (doc.contains("period") && !doc["period"].is_null()) {
    if (!doc["period"].is_number()) throw Error(ErrorCode::Config, "\"period\" must be a number or null");
    return IntervalSet::periodic(std::move(raw), doc["period"].get<double>());
  }
  return IntervalSet::normalize(std::move(raw));
}

}  // namespace thickset
