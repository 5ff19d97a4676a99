#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "thickset/bounds.hpp"
#include "thickset/interval_set.hpp"
#include "thickset/trig_poly.hpp"

namespace thickset {

// ---------------------------------------------------------------------------
// Good/bad interval decomposition

struct ClassifierParams {
  double A = 3.0;        // bad-interval threshold
  double B = 3.0;        // pointwise threshold (recorded only)
  double c_bern = 0.5;   // Bernstein constant: ‖f^(α)‖_p <= (c_bern·b)^α ‖f‖_p
  int alpha_max = 0;     // 0 selects default_alpha_max(p, A)
  double p = 1.0;        // finite exponent
};

/// ceil(log(1/ε) / (p log A)): the first order with A^{-αp} <= ε. The omitted
/// tail Σ_{α>order} A^{-αp} is then at most ε/(A^p - 1).
int default_alpha_max(double p, double A, double epsilon = 1e-6);

/// Σ_{α > alpha_max} A^{-αp}.
double truncation_tail(double p, double A, int alpha_max);

/// Unit intervals [k, k+1) covering [0, L); L must be a positive integer.
std::vector<Interval> unit_partition(double period);

struct LabeledInterval {
  Interval interval;
  bool bad = false;
  int witness_order = 0;  // first α certifying badness, 0 for good intervals
  double mass = 0.0;      // ∫_I |f|^p
};

/// I is bad iff ∫_I |f^(α)|^p >= (A·c_bern·b)^{αp} ∫_I |f|^p for some 1 <= α <= alpha_max.
std::vector<LabeledInterval> classify_intervals(const TrigPoly& f, double b, std::span<const Interval> partition,
                                                const ClassifierParams& params = {});

struct GoodMassReport {
  double good_fraction = 0.0;
  double bad_fraction = 0.0;
  double bad_limit = 0.0;  // 1/(A^p - 1)
  double tolerance = 0.0;  // truncation tail + quadrature allowance
  bool holds = false;      // good >= 1/2 - tol and bad <= bad_limit + tol
};

GoodMassReport good_mass_check(const TrigPoly& f, std::span<const LabeledInterval> labels,
                               const ClassifierParams& params = {});

// ---------------------------------------------------------------------------
// Local estimate and growth envelope on a single interval

struct LocalEstimate {
  double lhs = 0.0;          // ∫_{E∩I} |f|^p
  double local_mass = 0.0;   // ∫_I |f|^p
  double gamma_local = 0.0;  // |E ∩ I| (I has unit length)
  double log_rhs = 0.0;      // log of (γ_I/C)^{C b p + 2} ∫_I |f|^p
  bool holds = false;
};

LocalEstimate local_estimate_check(const TrigPoly& f, const IntervalSet& set, Interval interval, double p, double b,
                                   const BoundConstants& k = {});

struct Envelope {
  double ratio = 0.0;  // max_{|y - center| <= R} |f(y)| / ‖f‖_{L^p(I)}
  double bound = 0.0;  // 2^{1/p} exp(c_env b (R + 1/2))
  bool holds = false;
};

Envelope growth_envelope(const TrigPoly& f, Interval interval, double radius, Exponent p, double b,
                         double c_env = 1.0);

// ---------------------------------------------------------------------------
// Exponential sums with polynomial coefficients

/// r(x) = Σ_k P_k(x - origin) exp(i λ_k x).
class ExpSum {
 public:
  struct Component {
    double lambda = 0.0;
    std::vector<Complex> poly;  // coefficients of (x - origin)^l
  };

  ExpSum(double origin, std::vector<Component> components);

  Complex operator()(double x) const;
  double origin() const noexcept { return origin_; }
  const std::vector<Component>& components() const noexcept { return components_; }
  int count() const noexcept { return static_cast<int>(components_.size()); }
  /// m: one more than the largest polynomial degree.
  int degree_budget() const noexcept;
  double max_frequency() const noexcept;

 private:
  double origin_;
  std::vector<Component> components_;
};

double lp_norm(const ExpSum& r, Exponent p, std::span<const Interval> pieces);

// ---------------------------------------------------------------------------
// Taylor split f = r + T on (s, s + a)

class TaylorSplit {
 public:
  TaylorSplit(std::vector<TrigPoly> components, std::vector<double> centers, Interval interval, int m);

  int degree() const noexcept { return m_; }
  Interval interval() const noexcept { return interval_; }
  const ExpSum& polynomial_part() const noexcept { return r_; }
  const std::vector<TrigPoly>& components() const noexcept { return components_; }

  /// f(x) = Σ f_k(x) exp(i λ_k x).
  Complex original(double x) const;
  /// T(x) = (1/(m-1)!) Σ exp(i λ_k x) ∫_s^x f_k^(m)(t) (x - t)^{m-1} dt.
  Complex remainder(double x) const;

 private:
  std::vector<TrigPoly> components_;
  std::vector<TrigPoly> mth_derivatives_;
  std::vector<double> centers_;
  Interval interval_;
  int m_;
  ExpSum r_;
};

TaylorSplit taylor_split(std::vector<TrigPoly> components, std::vector<double> centers, Interval interval, int m);

struct RemainderCheck {
  double lhs = 0.0;  // ∫_I |T|^p
  double rhs = 0.0;  // n^{p-1} a^{pm} / (m!)^p Σ_k ∫_I |f_k^(m)|^p
  bool holds = false;
};

RemainderCheck remainder_bound_check(const TaylorSplit& split, double p);

// ---------------------------------------------------------------------------
// Band projections

struct BandComponents {
  std::vector<TrigPoly> components;  // f restricted to each J_k
  std::vector<double> norms;
  double total_norm = 0.0;
  double max_ratio = 0.0;
  bool separated = false;  // λ_{k+1} - λ_k >= 2b
};

BandComponents band_component_norms(const TrigPoly& f, const BandSpec& spec, Exponent p);

// ---------------------------------------------------------------------------
// Remez / Nazarov / exponential-sum inequality

struct ExpSumCheck {
  double ratio = 0.0;  // ‖r‖_{L^p(I)} / ‖r‖_{L^p(E)}
  BoundValue bound;    // (C|I|/|E|)^{nm - (p-1)/p}
  bool holds = false;
  std::optional<BoundValue> remez;  // (4|I|/|E|)^{deg}, pure polynomials at p = inf only
  std::optional<bool> remez_holds;
};

ExpSumCheck exp_sum_verifier(const ExpSum& r, Interval interval, std::span<const Interval> subset, Exponent p,
                             const BoundConstants& k = {});

/// The grid 2^{j/2}, j = 0..18, i.e. 1 ... 512.
std::vector<double> constant_grid();

/// Smallest grid C with worst_ratio[i] <= (C / density[i])^{nm - (p-1)/p} for every i.
std::optional<double> minimal_constant(std::span<const double> densities, std::span<const double> worst_ratios, int n,
                                       int m, Exponent p);

/// Random r with n components, polynomial degree < m, frequencies in [-max_lambda, max_lambda].
ExpSum random_exp_sum(int n, int m, double origin, double max_lambda, std::uint64_t seed);

/// T_deg mapped affinely onto `subset`, as a polynomial in x (origin 0):
/// the extremal instance of the Remez inequality for E = subset.
ExpSum chebyshev_instance(Interval subset, int degree);

/// Random subset of `interval` made of `pieces` disjoint subintervals with total measure density·|I|.
std::vector<Interval> random_subset(Interval interval, double density, int pieces, std::uint64_t seed);

}  // namespace thickset
