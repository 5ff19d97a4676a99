#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "thickset/interval_set.hpp"

using namespace thickset;

namespace {

// Direct overlap sum over the periodic copies that can meet [lo, hi].
double unrolled_measure(const IntervalSet& set, double lo, double hi) {
  if (!set.is_periodic()) {
    double total = 0.0;
    for (const auto& iv : set.intervals()) total += std::max(0.0, std::min(hi, iv.hi) - std::max(lo, iv.lo));
    return total;
  }
  const double period = *set.period();
  double total = 0.0;
  for (long k = static_cast<long>(std::floor(lo / period)) - 1; k <= static_cast<long>(std::ceil(hi / period)) + 1;
       ++k) {
    for (const auto& iv : set.intervals()) {
      const double a = iv.lo + k * period;
      const double b = iv.hi + k * period;
      total += std::max(0.0, std::min(hi, b) - std::max(lo, a));
    }
  }
  return total;
}

// The window measure is piecewise linear in the window start, so its minimum
// sits where the start or the end crosses an endpoint.
double breakpoint_min(const IntervalSet& set, double a) {
  const double period = *set.period();
  double best = 1e300;
  for (const auto& iv : set.intervals()) {
    for (double e : {iv.lo, iv.hi}) {
      for (double s : {e, e - a}) {
        const double start = s - std::floor(s / period) * period;
        best = std::min(best, unrolled_measure(set, start, start + a));
      }
    }
  }
  return best / a;
}

IntervalSet random_periodic(std::mt19937_64& rng, double period) {
  std::uniform_real_distribution<double> u(0.0, period);
  std::uniform_int_distribution<int> count(1, 5);
  std::vector<Interval> raw;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double lo = u(rng);
    const double len = 0.2 * period * std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    raw.push_back({lo, lo + len});
  }
  return IntervalSet::periodic(raw, period);
}

}  // namespace

TEST_CASE("normalize merges, sorts and joins touching intervals") {
  CHECK(IntervalSet::normalize({{0, 1}, {0.5, 2}}).intervals() == std::vector<Interval>{{0, 2}});
  CHECK(IntervalSet::normalize({{3, 4}, {0, 1}}).intervals() == std::vector<Interval>{{0, 1}, {3, 4}});
  CHECK(IntervalSet::normalize({{0, 1}, {1, 2}}).intervals() == std::vector<Interval>{{0, 2}});
  CHECK_FALSE(IntervalSet::normalize({{0, 1}}).is_periodic());
}

TEST_CASE("normalize rejects empty and reversed input") {
  CHECK_ERROR(IntervalSet::normalize({}), EmptySet);
  CHECK_ERROR(IntervalSet::normalize({{1, 0}}), InvalidInterval);
  CHECK_ERROR(IntervalSet::normalize({{0, 0}}), InvalidInterval);
  CHECK_ERROR(IntervalSet::normalize({{0, NAN}}), InvalidInterval);
  CHECK_ERROR(IntervalSet::periodic({{0, 1}}, 0.0), InvalidArgument);
}

TEST_CASE("periodic sets wrap into one cell") {
  const auto set = IntervalSet::periodic({{0.9, 1.2}}, 1.0);
  REQUIRE(set.intervals().size() == 2);
  CHECK(set.intervals()[0].lo == doctest::Approx(0.0));
  CHECK(set.intervals()[0].hi == doctest::Approx(0.2));
  CHECK(set.intervals()[1].lo == doctest::Approx(0.9));
  CHECK(set.intervals()[1].hi == doctest::Approx(1.0));
  CHECK(set.cell_measure() == doctest::Approx(0.3));
}

TEST_CASE("measure_within on a periodic set") {
  const auto set = IntervalSet::periodic({{0.0, 0.3}}, 1.0);
  CHECK(measure_within(set, 0.0, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(measure_within(set, 0.3, 0.8) == doctest::Approx(0.0));
  CHECK(measure_within(set, 0.1, 1.2) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK_ERROR(measure_within(set, 1.0, 1.0), InvalidWindow);
}

TEST_CASE("measure_within agrees with a direct overlap sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double period = trial % 2 ? 1.0 : 2.5;
    const auto set = random_periodic(rng, period);
    double lo = u(rng);
    double hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 1e-9) continue;
    CHECK(measure_within(set, lo, hi) == doctest::Approx(unrolled_measure(set, lo, hi)).epsilon(1e-12));
  }
}

TEST_CASE("measure_within is additive and 1-Lipschitz") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> step(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = random_periodic(rng, 1.0);
    const double a = u(rng);
    const double m = a + 0.01 + step(rng);
    const double b = m + 0.01 + step(rng);
    CHECK(measure_within(set, a, b) ==
          doctest::Approx(measure_within(set, a, m) + measure_within(set, m, b)).epsilon(1e-12));
    const double d = step(rng);
    CHECK(std::abs(measure_within(set, a, b + d) - measure_within(set, a, b)) <= d + 1e-12);
    CHECK(std::abs(measure_within(set, a - d, b) - measure_within(set, a, b)) <= d + 1e-12);
  }
}

TEST_CASE("thickness examples") {
  const auto set = IntervalSet::periodic({{0.0, 0.3}}, 1.0);
  CHECK(thickness(set, 1.0).gamma == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(thickness(set, 0.5).gamma == doctest::Approx(0.0));
  CHECK(thickness(two_sliver_set(0.2), 1.0).gamma == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(thickness(two_sliver_set(0.5), 1.0).gamma == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(thickness(set, 1.0).a == 1.0);
}

TEST_CASE("thickness matches the breakpoint oracle and a dense window scan") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> window(0.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double period = trial % 3 ? 1.0 : 2.0;
    const auto set = random_periodic(rng, period);
    const double a = window(rng);
    const double gamma = thickness(set, a).gamma;
    CHECK(gamma == doctest::Approx(breakpoint_min(set, a)).epsilon(1e-10));
    double scanned = 1e300;
    const int steps = 400;
    for (int i = 0; i < steps; ++i) {
      const double s = period * i / steps;
      scanned = std::min(scanned, unrolled_measure(set, s, s + a) / a);
    }
    CHECK(gamma <= scanned + 1e-12);
    CHECK(gamma >= scanned - 2.0 * period / steps / a - 1e-12);
  }
}

TEST_CASE("thickness is monotone under inclusion") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto small = random_periodic(rng, 1.0);
    const auto big = unite(small, random_periodic(rng, 1.0));
    for (double a : {0.1, 0.37, 1.0, 2.5}) CHECK(thickness(small, a).gamma <= thickness(big, a).gamma + 1e-12);
  }
}

TEST_CASE("thickness is invariant under joint dilation") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const auto set = random_periodic(rng, 1.0);
    for (double s : {0.25, 3.0, 17.0}) {
      for (double a : {0.2, 1.0, 1.7}) {
        CHECK(thickness(set.scaled(s), a * s).gamma == doctest::Approx(thickness(set, a).gamma).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("thickness over whole periods equals the cell density") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = 1.5;
    const auto set = random_periodic(rng, period);
    for (int k = 1; k <= 3; ++k) {
      const double gamma = thickness(set, k * period).gamma;
      CHECK(gamma == doctest::Approx(set.cell_measure() / period).epsilon(1e-12));
      CHECK(gamma >= 0.0);
    }
    CHECK(thickness(set, 0.3).gamma <= 1.0);
  }
}

TEST_CASE("thickness of a bounded set needs a domain") {
  const auto set = IntervalSet::normalize({{0.0, 0.5}, {1.0, 1.5}, {2.0, 2.5}});
  CHECK_ERROR(thickness(set, 1.0), InvalidWindow);
  CHECK(thickness(set, 1.0, {0.0, 2.5}).gamma == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(thickness(set, 0.5, {0.0, 2.5}).gamma == doctest::Approx(0.0));
  CHECK_ERROR(thickness(set, 3.0, {0.0, 2.5}), InvalidWindow);
  CHECK_ERROR(thickness(IntervalSet::periodic({{0, 0.3}}, 1.0), 0.0), InvalidWindow);
}

TEST_CASE("two-sliver sets") {
  const auto full = two_sliver_set(1.0);
  CHECK(full.cell_measure() == doctest::Approx(1.0));
  CHECK(full.intervals().size() == 1);
  const auto set = two_sliver_set(0.2);
  REQUIRE(set.intervals().size() == 2);
  CHECK(set.intervals()[0].lo == doctest::Approx(0.0));
  CHECK(set.intervals()[0].hi == doctest::Approx(0.1));
  CHECK(set.intervals()[1].lo == doctest::Approx(0.9));
  CHECK(set.intervals()[1].hi == doctest::Approx(1.0));
  CHECK(*set.period() == 1.0);
  CHECK_ERROR(two_sliver_set(0.0), InvalidGamma);
  CHECK_ERROR(two_sliver_set(1.5), InvalidGamma);
}

TEST_CASE("translation, clipping and torus traces") {
  const auto shifted = two_sliver_set(0.2).translated(0.5);
  REQUIRE(shifted.intervals().size() == 1);
  CHECK(shifted.intervals()[0].lo == doctest::Approx(0.4));
  CHECK(shifted.intervals()[0].hi == doctest::Approx(0.6));
  const auto pieces = shifted.clip(-1.0, 1.0);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].lo == doctest::Approx(-0.6));
  CHECK(pieces[1].hi == doctest::Approx(0.6));
  const auto torus = on_torus(two_sliver_set(0.2), 3.0);
  CHECK(*torus.period() == 3.0);
  CHECK(torus.cell_measure() == doctest::Approx(0.6));
  CHECK_ERROR(unite(two_sliver_set(0.2), IntervalSet::normalize({{0, 1}})), InvalidArgument);
}

TEST_CASE("json round trip") {
  for (const auto& set : {two_sliver_set(0.3), IntervalSet::normalize({{-1.0, 0.5}, {2.0, 3.0}})}) {
    CHECK(interval_set_from_json(to_json(set)) == set);
  }
  CHECK_ERROR(interval_set_from_json(nlohmann::json::object()), Config);
  CHECK_ERROR(interval_set_from_json(nlohmann::json::parse(R"({"intervals": [[0]]})")), Config);
}
