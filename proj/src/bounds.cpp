#include "thickset/bounds.hpp"

#include <numeric>
#include <string>

#include "thickset/error.hpp"

namespace thickset {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidGamma, "gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
}

void check_ab(double ab) {
  if (!(ab >= 0.0) || !std::isfinite(ab)) throw Error(ErrorCode::InvalidArgument, "ab must be >= 0");
}

void check_constant(double c, const char* name) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
  }
}

void check_count(int n, const char* name) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be >= 1");
}

void check_measures(double len_i, double meas_e) {
  if (!(meas_e > 0.0)) throw Error(ErrorCode::EmptySet, "|E| must be positive");
  if (!(len_i > 0.0) || meas_e > len_i * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < |E| <= |I|");
  }
}

}  // namespace

void BoundConstants::validate() const {
  for (double c : {c_t1, c_t1_inf, k_t1, c_t2, c_aux}) {
    if (!(c > 1.0) || !std::isfinite(c)) throw Error(ErrorCode::Config, "bound constants must all exceed 1");
  }
}

namespace detail {

double theorem2_log(double c_over_gamma, int n, double ab, Exponent p) {
  const double log_base = std::log(c_over_gamma);
  const double tower = ab == 0.0 ? 0.0 : ab * std::exp(static_cast<double>(n) * log_base);
  const double exponent = -tower - static_cast<double>(n) + p.conjugate_ratio();
  return exponent * log_base;
}

double theorem4_log(double cd_over_gamma, int n, double ab_sum, Exponent p) {
  return theorem2_log(cd_over_gamma, n, ab_sum, p);
}

}  // namespace detail

BoundValue theorem1_bound(double gamma, double ab, Exponent p, const BoundConstants& k) {
  check_gamma(gamma);
  check_ab(ab);
  if (p.is_infinite()) {
    check_constant(k.c_t1_inf, "c_t1_inf");
    return {(k.k_t1 * ab + 1.0) * std::log(gamma / k.c_t1_inf)};
  }
  check_constant(k.c_t1, "c_t1");
  return {(k.k_t1 * ab + 2.0 * p.inverse()) * std::log(gamma / k.c_t1)};
}

BoundValue theorem2_bound(double gamma, int n, double ab, Exponent p, const BoundConstants& k) {
  check_gamma(gamma);
  check_ab(ab);
  check_count(n, "n");
  check_constant(k.c_t2, "c_t2");
  return {detail::theorem2_log(k.c_t2 / gamma, n, ab, p)};
}

BoundValue theorem2prime_bound(double gamma, int n, double ab, Exponent p, const BoundConstants& k) {
  check_gamma(gamma);
  check_ab(ab);
  check_count(n, "n");
  check_constant(k.c_t2, "c_t2");
  const double c_over_gamma = k.c_t2 / gamma;
  const double tower = ab == 0.0 ? 0.0 : ab * std::pow(c_over_gamma, n);
  const double exponent = tower + static_cast<double>(n) - p.conjugate_ratio();
  return {exponent * std::log(gamma / k.c_t2)};
}

Remark1Bounds remark1_bounds(double gamma, double ab, Exponent p) {
  Remark1Bounds out;
  if (ab <= 1.0) out.small_ab = std::pow(gamma, p.inverse()) / 2.0;
  if (!p.is_infinite() && 1.0 - gamma <= 1.0 / (2.0 + p.value() * ab)) {
    out.near_full = std::pow(0.5, p.inverse());
  }
  return out;
}

BoundValue lemma1_corollary_bound(double meas_e, double max_modulus, std::optional<Exponent> p,
                                  const BoundConstants& k) {
  if (!(max_modulus >= 1.0)) throw Error(ErrorCode::InvalidM, "M = max |phi| must be >= 1");
  if (!(meas_e > 0.0)) throw Error(ErrorCode::EmptySet, "|E| must be positive");
  if (meas_e > 1.0 + 1e-12) throw Error(ErrorCode::InvalidArgument, "|E| must not exceed the unit interval");
  check_constant(k.c_aux, "c_aux");
  double exponent = std::log(max_modulus) / std::log(2.0);
  if (p) exponent += p->inverse();
  return {exponent * std::log(k.c_aux / meas_e)};
}

BoundValue lemma3_bound(double len_i, double meas_e, int n, int m, Exponent p, const BoundConstants& k) {
  check_measures(len_i, meas_e);
  check_count(n, "n");
  check_count(m, "m");
  check_constant(k.c_aux, "c_aux");
  const double exponent = static_cast<double>(n) * static_cast<double>(m) - p.conjugate_ratio();
  return {exponent * std::log(k.c_aux * len_i / meas_e)};
}

NazarovRemez nazarov_remez_bounds(double len_i, double meas_e, int n, const BoundConstants& k) {
  check_measures(len_i, meas_e);
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  check_constant(k.c_aux, "c_aux");
  const double ratio = len_i / meas_e;
  return {{static_cast<double>(n - 1) * std::log(k.c_aux * ratio)}, {static_cast<double>(n) * std::log(4.0 * ratio)}};
}

BoundValue multidim_bound(double gamma, const MultiDimParams& params, Exponent p, std::optional<int> n,
                          const BoundConstants& k) {
  check_gamma(gamma);
  check_count(params.d, "d");
  if (params.ab_products.size() != static_cast<std::size_t>(params.d)) {
    throw Error(ErrorCode::InvalidArgument, "need exactly d products a_k b_k");
  }
  for (double ab : params.ab_products) check_ab(ab);
  const double ab_sum = std::accumulate(params.ab_products.begin(), params.ab_products.end(), 0.0);
  const double d = static_cast<double>(params.d);
  if (n) {
    check_count(*n, "n");
    check_constant(k.c_t2, "c_t2");
    const double cd_over_gamma = std::exp(d * std::log(k.c_t2)) / gamma;
    return {detail::theorem4_log(cd_over_gamma, *n, ab_sum, p)};
  }
  check_constant(k.c_t1, "c_t1");
  return {k.c_t1 * (d + ab_sum) * (std::log(gamma) - d * std::log(k.c_t1))};
}

}  // namespace thickset
