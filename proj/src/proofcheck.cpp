#include "thickset/proofcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "thickset/error.hpp"
#include "thickset/quadrature.hpp"

namespace thickset {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRelativeSlack = 1e-9;

double pieces_measure(std::span<const Interval> pieces) {
  double total = 0.0;
  for (const auto& iv : pieces) total += iv.length();
  return total;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= static_cast<double>(i);
  return out;
}

}  // namespace

int default_alpha_max(double p, double A, double epsilon) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "classifier needs finite p >= 1");
  if (!(A > 1.0)) throw Error(ErrorCode::InvalidArgument, "A must exceed 1");
  const double order = std::ceil(std::log(1.0 / epsilon) / (p * std::log(A)));
  return std::max(1, static_cast<int>(order));
}

double truncation_tail(double p, double A, int alpha_max) {
  const double ratio = std::pow(A, -p);
  return std::pow(ratio, alpha_max + 1) / (1.0 - ratio);
}

std::vector<Interval> unit_partition(double period) {
  const double count = std::round(period);
  if (!(count >= 1.0) || std::abs(period - count) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "unit partition needs a positive integer period");
  }
  std::vector<Interval> out;
  for (int k = 0; k < static_cast<int>(count); ++k) out.push_back({double(k), double(k + 1)});
  return out;
}

std::vector<LabeledInterval> classify_intervals(const TrigPoly& f, double b, std::span<const Interval> partition,
                                                const ClassifierParams& params) {
  if (!(b > 0.0)) throw Error(ErrorCode::InvalidBand, "bandwidth b must be positive");
  if (!(params.A > 1.0)) throw Error(ErrorCode::InvalidArgument, "A must exceed 1");
  const int alpha_max = params.alpha_max > 0 ? params.alpha_max : default_alpha_max(params.p, params.A);
  const double p = params.p;

  // coefficients of f^(α) / (A c b)^α for α = 0..alpha_max
  const double scale = params.A * params.c_bern * b;
  const auto& terms = f.terms();
  const std::size_t n_terms = terms.size();
  std::vector<std::vector<Complex>> scaled(static_cast<std::size_t>(alpha_max) + 1, std::vector<Complex>(n_terms));
  for (std::size_t j = 0; j < n_terms; ++j) {
    const Complex step(0.0, f.frequency(j) / scale);
    Complex factor = terms[j].coefficient;
    for (int alpha = 0; alpha <= alpha_max; ++alpha) {
      scaled[static_cast<std::size_t>(alpha)][j] = factor;
      factor *= step;
    }
  }

  const double panel = panel_width(f, 8.0);
  const double base_phase = kTwoPi / f.period();
  std::vector<LabeledInterval> labels;
  labels.reserve(partition.size());
  std::vector<double> masses(static_cast<std::size_t>(alpha_max) + 1);
  std::vector<Complex> waves(n_terms);
  for (const auto& interval : partition) {
    const auto nodes = quadrature::composite_nodes(std::span(&interval, 1), panel);
    std::fill(masses.begin(), masses.end(), 0.0);
    for (std::size_t q = 0; q < nodes.x.size(); ++q) {
      for (std::size_t j = 0; j < n_terms; ++j) {
        waves[j] = std::polar(1.0, base_phase * static_cast<double>(terms[j].index) * nodes.x[q]);
      }
      for (std::size_t alpha = 0; alpha < masses.size(); ++alpha) {
        Complex value;
        for (std::size_t j = 0; j < n_terms; ++j) value += scaled[alpha][j] * waves[j];
        masses[alpha] += nodes.w[q] * std::pow(std::abs(value), p);
      }
    }
    LabeledInterval label{interval, false, 0, masses[0]};
    for (int alpha = 1; alpha <= alpha_max; ++alpha) {
      if (masses[static_cast<std::size_t>(alpha)] >= masses[0]) {
        label.bad = true;
        label.witness_order = alpha;
        break;
      }
    }
    labels.push_back(label);
  }
  return labels;
}

GoodMassReport good_mass_check(const TrigPoly& f, std::span<const LabeledInterval> labels,
                               const ClassifierParams& params) {
  const int alpha_max = params.alpha_max > 0 ? params.alpha_max : default_alpha_max(params.p, params.A);
  const Interval torus{0.0, f.period()};
  const double total = lp_power(f, params.p, std::span(&torus, 1));
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroFunction, "good-mass check of the zero function");
  double good = 0.0;
  double bad = 0.0;
  for (const auto& label : labels) (label.bad ? bad : good) += label.mass;
  GoodMassReport report;
  report.good_fraction = good / total;
  report.bad_fraction = bad / total;
  report.bad_limit = 1.0 / (std::pow(params.A, params.p) - 1.0);
  report.tolerance = truncation_tail(params.p, params.A, alpha_max) + kRelativeSlack;
  report.holds = report.good_fraction >= 0.5 - report.tolerance &&
                 report.bad_fraction <= report.bad_limit + report.tolerance;
  return report;
}

LocalEstimate local_estimate_check(const TrigPoly& f, const IntervalSet& set, Interval interval, double p, double b,
                                   const BoundConstants& k) {
  const auto pieces = set.clip(interval.lo, interval.hi);
  const double gamma_local = pieces_measure(pieces) / interval.length();
  if (!(gamma_local > 0.0)) throw Error(ErrorCode::EmptySet, "E does not meet the interval");
  LocalEstimate out;
  out.gamma_local = gamma_local;
  out.lhs = lp_power(f, p, pieces);
  out.local_mass = lp_power(f, p, std::span(&interval, 1));
  const double c = k.c_aux;
  out.log_rhs = (c * b * p + 2.0) * std::log(gamma_local / c) + std::log(out.local_mass);
  out.holds = out.lhs > 0.0 && std::log(out.lhs) >= out.log_rhs;
  return out;
}

Envelope growth_envelope(const TrigPoly& f, Interval interval, double radius, Exponent p, double b, double c_env) {
  const double center = 0.5 * (interval.lo + interval.hi);
  const double local = lp_norm(f, p, std::span(&interval, 1));
  if (!(local > 0.0)) throw Error(ErrorCode::ZeroFunction, "f vanishes on the interval");
  const double peak = quadrature::sup_on_interval([&f](double y) { return std::abs(f(y)); }, center - radius,
                                                  center + radius, panel_width(f, 8.0));
  Envelope out;
  out.ratio = peak / local;
  out.bound = std::pow(2.0, p.inverse()) * std::exp(c_env * b * (radius + 0.5));
  out.holds = out.ratio <= out.bound * (1.0 + kRelativeSlack);
  return out;
}

ExpSum::ExpSum(double origin, std::vector<Component> components)
    : origin_(origin), components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "exponential sum needs a component");
  for (const auto& c : components_) {
    if (c.poly.empty()) throw Error(ErrorCode::InvalidDegree, "polynomial coefficient list is empty");
  }
}

Complex ExpSum::operator()(double x) const {
  const double u = x - origin_;
  Complex sum;
  for (const auto& c : components_) {
    Complex horner;
    for (auto it = c.poly.rbegin(); it != c.poly.rend(); ++it) horner = horner * u + *it;
    sum += horner * std::polar(1.0, c.lambda * x);
  }
  return sum;
}

int ExpSum::degree_budget() const noexcept {
  std::size_t m = 1;
  for (const auto& c : components_) m = std::max(m, c.poly.size());
  return static_cast<int>(m);
}

double ExpSum::max_frequency() const noexcept {
  double top = 0.0;
  for (const auto& c : components_) top = std::max(top, std::abs(c.lambda));
  return top;
}

double lp_norm(const ExpSum& r, Exponent p, std::span<const Interval> pieces) {
  if (pieces.empty()) throw Error(ErrorCode::EmptySet, "norm over an empty set");
  const double top = r.max_frequency();
  const double panel = (top > 0.0 ? std::min(1.0, kTwoPi / top) : 1.0) / 16.0;
  if (p.is_infinite()) {
    double best = 0.0;
    for (const auto& piece : pieces) {
      best = std::max(best,
                      quadrature::sup_on_interval([&r](double x) { return std::abs(r(x)); }, piece.lo, piece.hi, panel));
    }
    return best;
  }
  const auto nodes = quadrature::composite_nodes(pieces, panel);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) sum += nodes.w[i] * std::pow(std::abs(r(nodes.x[i])), p.value());
  return std::pow(sum, 1.0 / p.value());
}

namespace {

ExpSum taylor_polynomials(const std::vector<TrigPoly>& components, const std::vector<double>& centers, double s,
                          int m) {
  std::vector<ExpSum::Component> parts;
  for (std::size_t k = 0; k < components.size(); ++k) {
    ExpSum::Component part{centers[k], {}};
    for (int l = 0; l < m; ++l) part.poly.push_back(components[k].derivative(l)(s) / factorial(l));
    parts.push_back(std::move(part));
  }
  return ExpSum(s, std::move(parts));
}

ExpSum checked_taylor_polynomials(const std::vector<TrigPoly>& components, const std::vector<double>& centers,
                                  Interval interval, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidDegree, "Taylor degree m must be >= 1");
  if (components.empty() || components.size() != centers.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one center per component");
  }
  if (!(interval.lo < interval.hi)) throw Error(ErrorCode::InvalidInterval, "Taylor interval needs lo < hi");
  return taylor_polynomials(components, centers, interval.lo, m);
}

}  // namespace

TaylorSplit::TaylorSplit(std::vector<TrigPoly> components, std::vector<double> centers, Interval interval, int m)
    : components_(std::move(components)),
      centers_(std::move(centers)),
      interval_(interval),
      m_(m),
      r_(checked_taylor_polynomials(components_, centers_, interval, m)) {
  for (const auto& fk : components_) mth_derivatives_.push_back(fk.derivative(m));
}

Complex TaylorSplit::original(double x) const {
  Complex sum;
  for (std::size_t k = 0; k < components_.size(); ++k) sum += components_[k](x) * std::polar(1.0, centers_[k] * x);
  return sum;
}

Complex TaylorSplit::remainder(double x) const {
  const double s = interval_.lo;
  if (x == s) return {};
  Complex sum;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const TrigPoly& dm = mth_derivatives_[k];
    const double panel = panel_width(dm, 8.0);
    const Complex integral = quadrature::integrate(
        [&](double t) { return dm(t) * std::pow(x - t, m_ - 1); }, s, x, panel);
    sum += integral * std::polar(1.0, centers_[k] * x);
  }
  return sum / factorial(m_ - 1);
}

TaylorSplit taylor_split(std::vector<TrigPoly> components, std::vector<double> centers, Interval interval, int m) {
  return TaylorSplit(std::move(components), std::move(centers), interval, m);
}

RemainderCheck remainder_bound_check(const TaylorSplit& split, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "remainder check needs finite p");
  const Interval interval = split.interval();
  const double a = interval.length();
  const int m = split.degree();
  const auto n = static_cast<double>(split.components().size());

  double top = 0.0;
  for (const auto& fk : split.components()) top = std::max(top, fk.max_frequency());
  const double panel = (top > 0.0 ? std::min(1.0, kTwoPi / top) : 1.0) / 8.0;
  RemainderCheck out;
  out.lhs = quadrature::integrate([&](double x) { return std::pow(std::abs(split.remainder(x)), p); }, interval.lo,
                                  interval.hi, panel);
  double derivative_mass = 0.0;
  for (const auto& fk : split.components()) {
    derivative_mass += lp_power(fk.derivative(m), p, std::span(&interval, 1));
  }
  out.rhs = std::pow(n, p - 1.0) * std::pow(a, p * m) / std::pow(factorial(m), p) * derivative_mass;
  out.holds = out.lhs <= out.rhs * (1.0 + kRelativeSlack) + 1e-300;
  return out;
}

BandComponents band_component_norms(const TrigPoly& f, const BandSpec& spec, Exponent p) {
  if (spec.overlapping()) throw Error(ErrorCode::BandOverlap, "bands overlap");
  std::vector<std::vector<Term>> split(spec.count());
  for (std::size_t j = 0; j < f.terms().size(); ++j) {
    if (f.terms()[j].coefficient == Complex{}) continue;
    const auto band = spec.band_of(f.frequency(j));
    if (!band) throw Error(ErrorCode::InvalidBand, "spectrum of f leaves the bands");
    split[*band].push_back(f.terms()[j]);
  }
  BandComponents out;
  out.separated = spec.separated();
  const Interval torus{0.0, f.period()};
  const std::span whole(&torus, 1);
  out.total_norm = lp_norm(f, p, whole);
  if (!(out.total_norm > 0.0)) throw Error(ErrorCode::ZeroFunction, "band split of the zero function");
  for (auto& terms : split) {
    TrigPoly component(f.period(), std::move(terms));
    const double norm = component.terms().empty() ? 0.0 : lp_norm(component, p, whole);
    out.norms.push_back(norm);
    out.max_ratio = std::max(out.max_ratio, norm / out.total_norm);
    out.components.push_back(std::move(component));
  }
  return out;
}

ExpSumCheck exp_sum_verifier(const ExpSum& r, Interval interval, std::span<const Interval> subset, Exponent p,
                             const BoundConstants& k) {
  const double meas = pieces_measure(subset);
  if (!(meas > 0.0)) throw Error(ErrorCode::EmptySet, "subset E has zero measure");
  const double len = interval.length();
  ExpSumCheck out;
  const double on_subset = lp_norm(r, p, subset);
  const double on_interval = lp_norm(r, p, std::span(&interval, 1));
  out.ratio = on_subset > 0.0 ? on_interval / on_subset : std::numeric_limits<double>::infinity();
  out.bound = lemma3_bound(len, meas, r.count(), r.degree_budget(), p, k);
  out.holds = std::log(out.ratio) <= out.bound.log + kRelativeSlack;
  const auto& parts = r.components();
  if (p.is_infinite() && parts.size() == 1 && parts.front().lambda == 0.0) {
    int degree = 0;
    for (int l = 0; l < static_cast<int>(parts.front().poly.size()); ++l) {
      if (parts.front().poly[static_cast<std::size_t>(l)] != Complex{}) degree = l;
    }
    out.remez = nazarov_remez_bounds(len, meas, degree, k).remez;
    out.remez_holds = std::log(out.ratio) <= out.remez->log + kRelativeSlack;
  }
  return out;
}

std::vector<double> constant_grid() {
  std::vector<double> grid;
  for (int j = 0; j <= 18; ++j) grid.push_back(std::exp2(0.5 * j));
  return grid;
}

std::optional<double> minimal_constant(std::span<const double> densities, std::span<const double> worst_ratios, int n,
                                       int m, Exponent p) {
  if (densities.size() != worst_ratios.size() || densities.empty()) {
    throw Error(ErrorCode::InsufficientData, "need matching densities and ratios");
  }
  const double exponent = static_cast<double>(n) * static_cast<double>(m) - p.conjugate_ratio();
  for (double c : constant_grid()) {
    bool ok = true;
    for (std::size_t i = 0; i < densities.size() && ok; ++i) {
      ok = std::log(worst_ratios[i]) <= exponent * std::log(c / densities[i]) + kRelativeSlack;
    }
    if (ok) return c;
  }
  return std::nullopt;
}

ExpSum random_exp_sum(int n, int m, double origin, double max_lambda, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (m < 1) throw Error(ErrorCode::InvalidDegree, "m must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lambda(-max_lambda, max_lambda);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<ExpSum::Component> parts;
  for (int k = 0; k < n; ++k) {
    ExpSum::Component part{lambda(rng), {}};
    for (int l = 0; l < m; ++l) {
      const double re = normal(rng);
      const double im = normal(rng);
      part.poly.emplace_back(re, im);
    }
    parts.push_back(std::move(part));
  }
  return ExpSum(origin, std::move(parts));
}

ExpSum chebyshev_instance(Interval subset, int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidDegree, "degree must be >= 0");
  if (!(subset.lo < subset.hi)) throw Error(ErrorCode::InvalidInterval, "subset needs lo < hi");
  // T_{k+1}(y) = 2y T_k(y) - T_{k-1}(y) with y = alpha x + beta
  const double alpha = 2.0 / subset.length();
  const double beta = -(subset.lo + subset.hi) / subset.length();
  std::vector<double> prev{1.0};
  std::vector<double> curr{beta, alpha};
  if (degree == 0) curr = prev;
  for (int k = 1; k < degree; ++k) {
    std::vector<double> next(curr.size() + 1, 0.0);
    for (std::size_t i = 0; i < curr.size(); ++i) {
      next[i] += 2.0 * beta * curr[i];
      next[i + 1] += 2.0 * alpha * curr[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(curr);
    curr = std::move(next);
  }
  ExpSum::Component part{0.0, {}};
  for (double c : curr) part.poly.emplace_back(c, 0.0);
  return ExpSum(0.0, {std::move(part)});
}

std::vector<Interval> random_subset(Interval interval, double density, int pieces, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  if (pieces < 1) throw Error(ErrorCode::InvalidArgument, "need at least one piece");
  if (density == 1.0) return {interval};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  const double len = interval.length();
  const double covered = density * len;
  std::vector<double> sizes(static_cast<std::size_t>(pieces));
  std::vector<double> gaps(static_cast<std::size_t>(pieces) + 1);
  for (auto& s : sizes) s = weight(rng);
  for (auto& g : gaps) g = weight(rng);
  const double size_sum = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  const double gap_sum = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  std::vector<Interval> out;
  double cursor = interval.lo;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    cursor += gaps[i] / gap_sum * (len - covered);
    const double width = sizes[i] / size_sum * covered;
    out.push_back({cursor, cursor + width});
    cursor += width;
  }
  return out;
}

}  // namespace thickset
