#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "thickset/exponent.hpp"
#include "thickset/interval_set.hpp"

namespace thickset {

using Complex = std::complex<double>;

/// n frequency bands J_k = [λ_k - b/2, λ_k + b/2] of common width b.
class BandSpec {
 public:
  BandSpec(std::vector<double> centers, double width);

  /// The single band [-b/2, b/2].
  static BandSpec centered(double width) { return BandSpec({0.0}, width); }

  const std::vector<double>& centers() const noexcept { return centers_; }
  double width() const noexcept { return width_; }
  std::size_t count() const noexcept { return centers_.size(); }

  Interval band(std::size_t k) const { return {centers_[k] - width_ / 2.0, centers_[k] + width_ / 2.0}; }
  std::optional<std::size_t> band_of(double frequency) const;
  bool contains(double frequency) const { return band_of(frequency).has_value(); }

  /// λ_{k+1} - λ_k >= 2b for all k.
  bool separated() const noexcept;
  /// Some pair of bands shares interior points.
  bool overlapping() const noexcept;

 private:
  std::vector<double> centers_;
  double width_;
};

struct Term {
  long long index = 0;  // lattice index m; frequency 2πm/L
  Complex coefficient;
};

/// Trigonometric polynomial Σ c_j exp(i 2π m_j x / L) on the torus of length L.
class TrigPoly {
 public:
  TrigPoly(double period, std::vector<Term> terms);

  double period() const noexcept { return period_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  double frequency(std::size_t j) const noexcept;
  double frequency_of_index(long long m) const noexcept;
  /// max |ν_j| over terms with nonzero coefficient (0 for the zero polynomial).
  double max_frequency() const noexcept;
  bool is_zero() const noexcept;
  std::vector<double> spectrum() const;
  bool in_band(const BandSpec& spec) const;

  Complex operator()(double x) const;
  void eval_many(std::span<const double> xs, std::span<Complex> out) const;

  TrigPoly derivative(int order) const;
  TrigPoly scaled(Complex factor) const;
  friend TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs);

 private:
  double period_;
  std::vector<Term> terms_;
};

struct NormQuery {
  Exponent p{2.0};
  IntervalSet set;
  double resolution = 8.0;  // panels per shortest wavelength (or per unit length)
};

/// Largest quadrature panel used for f: min(1, 2π/ν_max) / resolution.
double panel_width(const TrigPoly& f, double resolution);

/// The pieces of `set` over which f is integrated: one torus period for periodic sets.
std::vector<Interval> integration_pieces(const TrigPoly& f, const IntervalSet& set);

double lp_norm(const TrigPoly& f, const NormQuery& query);
double lp_norm(const TrigPoly& f, Exponent p, std::span<const Interval> pieces, double resolution = 8.0);

/// ∫ |f|^p over the pieces (finite p only).
double lp_power(const TrigPoly& f, double p, std::span<const Interval> pieces, double resolution = 8.0);

IntervalSet full_torus(double period);

/// Lattice indices m with 2πm/L inside some band, ascending.
std::vector<long long> lattice_indices(const BandSpec& spec, double period);

/// i.i.d. complex standard normal coefficients on the lattice frequencies of
/// the bands; at most `budget` terms when budget > 0.
TrigPoly random_bandlimited(const BandSpec& spec, double period, std::size_t budget, std::uint64_t seed);

/// ‖f'‖_p / ‖f‖_p over the full torus.
double bernstein_ratio(const TrigPoly& f, Exponent p);

nlohmann::json to_json(const TrigPoly& f);
TrigPoly trig_poly_from_json(const nlohmann::json& doc);

}  // namespace thickset
