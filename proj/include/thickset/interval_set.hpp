#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

namespace thickset {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint intervals, optionally repeated with a period L.
/// For periodic sets the stored intervals describe the fundamental cell [0, L).
class IntervalSet {
 public:
  /// Sorts and merges overlapping or touching intervals (tolerance 1e-12).
  static IntervalSet normalize(std::vector<Interval> raw);
  /// Builds an L-periodic set; intervals are wrapped into [0, L) first.
  static IntervalSet periodic(std::vector<Interval> raw, double period);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::optional<double> period() const noexcept { return period_; }
  bool is_periodic() const noexcept { return period_.has_value(); }

  /// Measure of the stored intervals (one cell for periodic sets).
  double cell_measure() const noexcept;

  IntervalSet scaled(double factor) const;
  IntervalSet translated(double shift) const;

  /// E ∩ [lo, hi] as an explicit sorted list, unwrapping periodicity.
  std::vector<Interval> clip(double lo, double hi) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  IntervalSet(std::vector<Interval> intervals, std::optional<double> period)
      : intervals_(std::move(intervals)), period_(period) {}

  std::vector<Interval> intervals_;
  std::optional<double> period_;
};

struct ThicknessCertificate {
  double a = 0.0;
  double gamma = 0.0;
};

/// Exact Lebesgue measure of E ∩ [lo, hi].
double measure_within(const IntervalSet& set, double lo, double hi);

/// inf over windows of length a of |E ∩ window| / a, for a periodic set.
ThicknessCertificate thickness(const IntervalSet& set, double a);

/// Same infimum restricted to windows contained in `domain`.
ThicknessCertificate thickness(const IntervalSet& set, double a, Interval domain);

/// 1-periodic set with cell [0, gamma/2) ∪ (1 - gamma/2, 1).
IntervalSet two_sliver_set(double gamma);

/// Union of two sets of the same periodicity.
IntervalSet unite(const IntervalSet& first, const IntervalSet& second);

/// The trace of E on one torus period [0, L), viewed as an L-periodic set.
IntervalSet on_torus(const IntervalSet& set, double period);

nlohmann::json to_json(const IntervalSet& set);
IntervalSet interval_set_from_json(const nlohmann::json& doc);

}  // namespace thickset
