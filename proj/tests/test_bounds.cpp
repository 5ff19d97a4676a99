#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "support.hpp"
#include "thickset/bounds.hpp"

using namespace thickset;

namespace {

const Exponent kOne(1.0);
const Exponent kTwo(2.0);
const Exponent kInf = Exponent::infinity();

BoundConstants unit_constants() {
  BoundConstants k;
  k.c_t1 = k.c_t1_inf = k.c_t2 = k.c_aux = 1.0;
  return k;
}

}  // namespace

TEST_CASE("theorem 1 values") {
  CHECK(theorem1_bound(1.0, 0.0, kInf).value() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(theorem1_bound(0.3, 1.0, kTwo).log10() == doctest::Approx(-102.0).epsilon(1e-13));
  // direct power form where it is representable
  for (double gamma : {0.05, 0.5, 1.0}) {
    for (double ab : {0.0, 0.25, 2.0}) {
      for (double p : {1.0, 2.0, 3.0}) {
        const double direct = std::pow(gamma / 300.0, 33.0 * ab + 2.0 / p);
        CHECK(theorem1_bound(gamma, ab, Exponent(p)).value() == doctest::Approx(direct).epsilon(1e-12));
      }
      CHECK(theorem1_bound(gamma, ab, kInf).value() ==
            doctest::Approx(std::pow(gamma / 100.0, 33.0 * ab + 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("theorem 2 values") {
  // n = 1: exponent -ab(C/γ) - 1 + (p-1)/p on the base C/γ
  const double gamma = 0.4;
  const double ab = 0.01;
  const double base = 300.0 / gamma;
  CHECK(theorem2_bound(gamma, 1, ab, kTwo).log ==
        doctest::Approx((-ab * base - 1.0 + 0.5) * std::log(base)).epsilon(1e-14));
  // n = 2, ab = 0, p = inf: (C/γ)^{-1}
  CHECK(theorem2_bound(gamma, 2, 0.0, kInf).value() == doctest::Approx(gamma / 300.0).epsilon(1e-14));
  // base 1 collapses everything to 1
  CHECK(detail::theorem2_log(1.0, 3, 5.0, kTwo) == 0.0);
  CHECK(theorem2_bound(1.0, 3, 5.0, kTwo, unit_constants()).value() == 1.0);
}

TEST_CASE("theorem 2 prime values") {
  for (double gamma : {0.1, 0.7}) {
    for (int n : {1, 2}) {
      for (double ab : {0.0, 1e-3}) {
        const double x = ab * std::pow(300.0 / gamma, n) + n - kTwo.conjugate_ratio();
        CHECK(theorem2prime_bound(gamma, n, ab, kTwo).log == doctest::Approx(-x * std::log(300.0 / gamma)));
        CHECK(theorem2prime_bound(gamma, n, ab, kTwo).log ==
              doctest::Approx(theorem2_bound(gamma, n, ab, kTwo).log).epsilon(1e-13));
      }
    }
  }
  CHECK(theorem2prime_bound(0.2, 1, 0.0, kOne).value() == doctest::Approx(0.2 / 300.0).epsilon(1e-14));
  CHECK(theorem2prime_bound(0.5, 2, 1.0, kTwo).log == doctest::Approx(360001.5 * std::log(1.0 / 600.0)).epsilon(1e-14));
}

TEST_CASE("remark 1 regimes") {
  const auto small = remark1_bounds(0.25, 1.0, kOne);
  REQUIRE(small.small_ab);
  CHECK(*small.small_ab == doctest::Approx(0.125));
  const auto full = remark1_bounds(1.0, 7.0, kTwo);
  REQUIRE(full.near_full);
  CHECK(*full.near_full == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_FALSE(remark1_bounds(0.5, 2.0, kTwo).small_ab);
  CHECK_FALSE(remark1_bounds(0.5, 2.0, kTwo).near_full);
  CHECK_FALSE(remark1_bounds(0.99, 0.5, kInf).near_full);
  CHECK(*remark1_bounds(0.3, 0.5, kInf).small_ab == 0.5);
}

TEST_CASE("lemma 1 corollary") {
  CHECK(lemma1_corollary_bound(0.3, 1.0, std::nullopt).value() == doctest::Approx(1.0));
  CHECK(lemma1_corollary_bound(1.0, 2.0, std::nullopt).value() == doctest::Approx(300.0).epsilon(1e-13));
  CHECK(lemma1_corollary_bound(0.4, 5.0, kInf).log == doctest::Approx(lemma1_corollary_bound(0.4, 5.0, std::nullopt).log));
  CHECK(lemma1_corollary_bound(0.5, 4.0, kTwo).value() == doctest::Approx(std::pow(600.0, 2.5)).epsilon(1e-12));
  CHECK_ERROR(lemma1_corollary_bound(0.5, 0.5, std::nullopt), InvalidM);
  CHECK_ERROR(lemma1_corollary_bound(0.0, 2.0, std::nullopt), EmptySet);
}

TEST_CASE("lemma 3 and the Nazarov / Remez bounds") {
  CHECK(lemma3_bound(1.0, 0.2, 1, 1, kInf).value() == doctest::Approx(1.0));
  CHECK(lemma3_bound(2.0, 0.5, 1, 1, kOne).value() == doctest::Approx(1200.0).epsilon(1e-13));
  CHECK(lemma3_bound(0.7, 0.7, 3, 2, kTwo, unit_constants()).value() == doctest::Approx(1.0));
  CHECK(lemma3_bound(1.0, 0.25, 2, 3, kTwo).value() == doctest::Approx(std::pow(1200.0, 5.5)).epsilon(1e-12));

  CHECK(nazarov_remez_bounds(1.0, 0.3, 1).nazarov.value() == doctest::Approx(1.0));
  CHECK(nazarov_remez_bounds(1.0, 0.3, 0).remez.value() == doctest::Approx(1.0));
  CHECK(nazarov_remez_bounds(1.0, 0.5, 2).remez.value() == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(nazarov_remez_bounds(3.0, 1.5, 2).remez.value() == doctest::Approx(64.0).epsilon(1e-14));

  CHECK_ERROR(lemma3_bound(1.0, 1.5, 1, 1, kTwo), InvalidArgument);
  CHECK_ERROR(lemma3_bound(1.0, 0.0, 1, 1, kTwo), EmptySet);
  CHECK_ERROR(lemma3_bound(1.0, 0.5, 0, 1, kTwo), InvalidArgument);
  CHECK_ERROR(nazarov_remez_bounds(1.0, 0.5, -1), InvalidArgument);
}

TEST_CASE("lemma 3 with m = 1 has the Nazarov exponent at p = inf") {
  for (int n : {1, 2, 5}) {
    for (double meas : {0.1, 0.6}) {
      CHECK(lemma3_bound(1.0, meas, n, 1, kInf).log == doctest::Approx(nazarov_remez_bounds(1.0, meas, n).nazarov.log));
    }
  }
}

TEST_CASE("multi-dimensional bounds") {
  for (double gamma : {0.2, 0.9}) {
    for (double ab : {0.0, 1.5}) {
      const double shape = 300.0 * (1.0 + ab) * std::log(gamma / 300.0);
      CHECK(multidim_bound(gamma, {1, {ab}}, kTwo, std::nullopt).log == doctest::Approx(shape).epsilon(1e-14));
    }
  }
  CHECK(multidim_bound(0.5, {2, {0.0, 0.0}}, kTwo, std::nullopt).log ==
        doctest::Approx(600.0 * std::log(0.5 / 90000.0)).epsilon(1e-14));
  CHECK(multidim_bound(1.0, {3, {0.0, 1.0, 2.0}}, kTwo, std::nullopt, unit_constants()).value() == 1.0);
  CHECK(detail::theorem4_log(1.0, 2, 3.0, kTwo) == 0.0);
  const double base = 90000.0 / 0.5;
  CHECK(multidim_bound(0.5, {2, {1.0, 1.0}}, kTwo, 2).log ==
        doctest::Approx((-2.0 * base * base - 2.0 + 0.5) * std::log(base)).epsilon(1e-14));
  CHECK_ERROR(multidim_bound(0.5, {2, {1.0}}, kTwo, std::nullopt), InvalidArgument);
}

TEST_CASE("theorem bounds increase in gamma, decrease in ab and stay in (0, 1]") {
  const std::vector<double> gammas{0.05, 0.1, 0.3, 0.6, 1.0};
  const std::vector<double> abs{0.0, 0.1, 0.5, 1.0, 3.0};
  for (const auto& p : {kOne, kTwo, Exponent(3.0), kInf}) {
    std::vector<std::function<double(double, double)>> bounds{
        [&](double g, double ab) { return theorem1_bound(g, ab, p).log; },
        [&](double g, double ab) { return theorem2_bound(g, 2, ab * 1e-4, p).log; },
        [&](double g, double ab) { return theorem2prime_bound(g, 2, ab * 1e-2, p).log; },
        [&](double g, double ab) { return multidim_bound(g, {2, {ab, 0.5 * ab}}, p, std::nullopt).log; },
        [&](double g, double ab) { return multidim_bound(g, {2, {ab, ab}}, p, 2).log; }};
    for (const auto& bound : bounds) {
      for (std::size_t i = 0; i < gammas.size(); ++i) {
        for (std::size_t j = 0; j < abs.size(); ++j) {
          const double v = bound(gammas[i], abs[j]);
          CHECK(v <= 0.0);
          CHECK(std::isfinite(v));
          if (i > 0) CHECK(bound(gammas[i - 1], abs[j]) < v);
          if (j > 0) CHECK(bound(gammas[i], abs[j - 1]) > v);
        }
      }
    }
  }
}

TEST_CASE("theorem 2 at n = 1 is weaker than theorem 1 once ab is not tiny") {
  for (const auto& p : {kOne, kTwo, Exponent(5.0), kInf}) {
    for (double gamma : {0.05, 0.2, 0.7, 1.0}) {
      for (double ab : {0.1, 1.0, 4.0, 10.0}) {
        CHECK(theorem2_bound(gamma, 1, ab, p).log <= theorem1_bound(gamma, ab, p).log);
        for (int n = 1; n < 4; ++n) {
          CHECK(theorem2_bound(gamma, n + 1, ab, p).log < theorem2_bound(gamma, n, ab, p).log);
        }
      }
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_ERROR(theorem1_bound(0.0, 1.0, kTwo), InvalidGamma);
  CHECK_ERROR(theorem1_bound(1.2, 1.0, kTwo), InvalidGamma);
  CHECK_ERROR(theorem1_bound(0.5, -1.0, kTwo), InvalidArgument);
  CHECK_ERROR(theorem2_bound(0.5, 0, 1.0, kTwo), InvalidArgument);
  BoundConstants bad;
  bad.c_t1 = -1.0;
  CHECK_ERROR(theorem1_bound(0.5, 1.0, kTwo, bad), InvalidArgument);
  CHECK_ERROR(bad.validate(), Config);
  bad.c_t1 = 1.0;
  CHECK_ERROR(bad.validate(), Config);
  CHECK_NOTHROW(BoundConstants{}.validate());
}

TEST_CASE("bound values compare on the log scale") {
  const BoundValue tiny{-5000.0};
  CHECK(tiny.value() == 0.0);
  CHECK(tiny.below(1e-300));
  CHECK_FALSE(tiny.below(0.0));
  CHECK(BoundValue{std::log(0.5)}.below(0.5));
  CHECK_FALSE(BoundValue{std::log(0.5)}.below(0.49));
}
