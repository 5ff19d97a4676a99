#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "thickset/exponent.hpp"

namespace thickset {

/// The constants "C" of the inequalities. Defaults follow the explicit
/// constants (300, 33, 100); everything else defaults to 300.
struct BoundConstants {
  double c_t1 = 300.0;      // base for finite p
  double c_t1_inf = 100.0;  // base for p = inf
  double k_t1 = 33.0;       // slope of the exponent in ab
  double c_t2 = 300.0;      // union-of-bands constant
  double c_aux = 300.0;     // local lemmas, Nazarov, local estimate

  /// Configuration-level check: every constant must exceed 1.
  void validate() const;
};

/// A positive quantity stored by its natural logarithm; most bounds here
/// underflow a double long before they stop being meaningful.
struct BoundValue {
  double log = 0.0;

  double value() const noexcept { return std::exp(log); }
  double log10() const noexcept { return log / std::log(10.0); }
  /// True when `measured` >= this bound up to a relative slack.
  bool below(double measured, double relative_slack = 0.0) const noexcept {
    return measured > 0.0 && std::log(measured) + relative_slack >= log;
  }
};

BoundValue theorem1_bound(double gamma, double ab, Exponent p, const BoundConstants& k = {});

BoundValue theorem2_bound(double gamma, int n, double ab, Exponent p, const BoundConstants& k = {});

BoundValue theorem2prime_bound(double gamma, int n, double ab, Exponent p, const BoundConstants& k = {});

struct Remark1Bounds {
  std::optional<double> small_ab;   // γ^{1/p}/2 when ab <= 1
  std::optional<double> near_full;  // (1/2)^{1/p} when 1 - γ <= 1/(2 + p ab), finite p
};

Remark1Bounds remark1_bounds(double gamma, double ab, Exponent p);

/// sup form (C/|E|)^{ln M / ln 2} when p is empty, otherwise the L^p form
/// with exponent ln M / ln 2 + 1/p.
BoundValue lemma1_corollary_bound(double meas_e, double max_modulus, std::optional<Exponent> p,
                                  const BoundConstants& k = {});

BoundValue lemma3_bound(double len_i, double meas_e, int n, int m, Exponent p, const BoundConstants& k = {});

struct NazarovRemez {
  BoundValue nazarov;  // (C|I|/|E|)^{n-1}
  BoundValue remez;    // (4|I|/|E|)^n
};

NazarovRemez nazarov_remez_bounds(double len_i, double meas_e, int n, const BoundConstants& k = {});

struct MultiDimParams {
  int d = 1;
  std::vector<double> ab_products;
};

/// Product-box bound for `d` dimensions; with `n` set, the union-of-boxes form.
BoundValue multidim_bound(double gamma, const MultiDimParams& params, Exponent p, std::optional<int> n,
                          const BoundConstants& k = {});

namespace detail {
// Raw exponent forms, valid for any positive base ratio; exposed for testing
// base-1 degenerate cases that the public preconditions exclude.
double theorem2_log(double c_over_gamma, int n, double ab, Exponent p);
double theorem4_log(double cd_over_gamma, int n, double ab_sum, Exponent p);
}  // namespace detail

}  // namespace thickset
