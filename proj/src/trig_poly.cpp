#include "thickset/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "thickset/error.hpp"
#include "thickset/quadrature.hpp"

namespace thickset {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool within(double value, const Interval& band) {
  const double slack = 1e-12 * (1.0 + std::abs(band.lo) + std::abs(band.hi));
  return value >= band.lo - slack && value <= band.hi + slack;
}

}  // namespace

BandSpec::BandSpec(std::vector<double> centers, double width) : centers_(std::move(centers)), width_(width) {
  if (centers_.empty()) throw Error(ErrorCode::InvalidBand, "a band spec needs at least one band");
  if (!(width_ > 0.0) || !std::isfinite(width_)) throw Error(ErrorCode::InvalidBand, "band width must be positive");
  std::sort(centers_.begin(), centers_.end());
}

std::optional<std::size_t> BandSpec::band_of(double frequency) const {
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    if (within(frequency, band(k))) return k;
  }
  return std::nullopt;
}

bool BandSpec::separated() const noexcept {
  for (std::size_t k = 0; k + 1 < centers_.size(); ++k) {
    if (centers_[k + 1] - centers_[k] < 2.0 * width_ * (1.0 - 1e-12)) return false;
  }
  return true;
}

bool BandSpec::overlapping() const noexcept {
  for (std::size_t k = 0; k + 1 < centers_.size(); ++k) {
    if (centers_[k + 1] - centers_[k] < width_ * (1.0 - 1e-12)) return true;
  }
  return false;
}

TrigPoly::TrigPoly(double period, std::vector<Term> terms) : period_(period), terms_(std::move(terms)) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw Error(ErrorCode::InvalidArgument, "torus period must be positive");
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  for (std::size_t j = 1; j < terms_.size(); ++j) {
    if (terms_[j].index == terms_[j - 1].index) {
      throw Error(ErrorCode::DuplicateFrequency, "lattice index " + std::to_string(terms_[j].index) + " repeated");
    }
  }
}

double TrigPoly::frequency_of_index(long long m) const noexcept {
  return kTwoPi * static_cast<double>(m) / period_;
}

double TrigPoly::frequency(std::size_t j) const noexcept { return frequency_of_index(terms_[j].index); }

double TrigPoly::max_frequency() const noexcept {
  double top = 0.0;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (terms_[j].coefficient != Complex{}) top = std::max(top, std::abs(frequency(j)));
  }
  return top;
}

bool TrigPoly::is_zero() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coefficient == Complex{}; });
}

std::vector<double> TrigPoly::spectrum() const {
  std::vector<double> out;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (terms_[j].coefficient != Complex{}) out.push_back(frequency(j));
  }
  return out;
}

bool TrigPoly::in_band(const BandSpec& spec) const {
  const auto freqs = spectrum();
  return std::all_of(freqs.begin(), freqs.end(), [&](double nu) { return spec.contains(nu); });
}

Complex TrigPoly::operator()(double x) const {
  Complex out;
  eval_many(std::span(&x, 1), std::span(&out, 1));
  return out;
}

void TrigPoly::eval_many(std::span<const double> xs, std::span<Complex> out) const {
  const double base_phase = kTwoPi / period_;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (terms_.empty()) {
      out[i] = {};
      continue;
    }
    const Complex step = std::polar(1.0, base_phase * x);
    Complex wave = std::polar(1.0, base_phase * static_cast<double>(terms_.front().index) * x);
    Complex sum = terms_.front().coefficient * wave;
    for (std::size_t j = 1; j < terms_.size(); ++j) {
      const long long gap = terms_[j].index - terms_[j - 1].index;
      wave = gap == 1 ? wave * step : std::polar(1.0, base_phase * static_cast<double>(terms_[j].index) * x);
      sum += terms_[j].coefficient * wave;
    }
    out[i] = sum;
  }
}

TrigPoly TrigPoly::derivative(int order) const {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
  std::vector<Term> out = terms_;
  // i^order cycles through 1, i, -1, -i
  static constexpr Complex kUnitPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const Complex rotation = kUnitPowers[order % 4];
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].coefficient *= rotation * std::pow(frequency(j), order);
  }
  return TrigPoly(period_, std::move(out));
}

TrigPoly TrigPoly::scaled(Complex factor) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coefficient *= factor;
  return TrigPoly(period_, std::move(out));
}

TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs) {
  if (lhs.period() != rhs.period()) throw Error(ErrorCode::InvalidArgument, "cannot add polynomials on different tori");
  std::vector<Term> merged;
  const auto& a = lhs.terms();
  const auto& b = rhs.terms();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      merged.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      merged.push_back(b[j++]);
    } else {
      merged.push_back({a[i].index, a[i].coefficient + b[j].coefficient});
      ++i;
      ++j;
    }
  }
  return TrigPoly(lhs.period(), std::move(merged));
}

double panel_width(const TrigPoly& f, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  const double top = f.max_frequency();
  const double wavelength = top > 0.0 ? std::min(1.0, kTwoPi / top) : 1.0;
  return wavelength / resolution;
}

std::vector<Interval> integration_pieces(const TrigPoly& f, const IntervalSet& set) {
  std::vector<Interval> pieces = set.is_periodic() ? set.clip(0.0, f.period()) : set.intervals();
  if (pieces.empty()) throw Error(ErrorCode::EmptySet, "integration set is empty on the torus");
  return pieces;
}

double lp_power(const TrigPoly& f, double p, std::span<const Interval> pieces, double resolution) {
  const auto nodes = quadrature::composite_nodes(pieces, panel_width(f, resolution));
  std::vector<Complex> values(nodes.x.size());
  f.eval_many(nodes.x, values);
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) sum += nodes.w[i] * std::norm(values[i]);
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) sum += nodes.w[i] * std::pow(std::abs(values[i]), p);
  }
  return sum;
}

double lp_norm(const TrigPoly& f, Exponent p, std::span<const Interval> pieces, double resolution) {
  if (pieces.empty()) throw Error(ErrorCode::EmptySet, "norm over an empty set");
  if (p.is_infinite()) {
    const double spacing = panel_width(f, resolution);
    double best = 0.0;
    for (const auto& piece : pieces) {
      best = std::max(best, quadrature::sup_on_interval([&f](double x) { return std::abs(f(x)); }, piece.lo,
                                                        piece.hi, spacing));
    }
    return best;
  }
  return std::pow(lp_power(f, p.value(), pieces, resolution), 1.0 / p.value());
}

double lp_norm(const TrigPoly& f, const NormQuery& query) {
  const auto pieces = integration_pieces(f, query.set);
  return lp_norm(f, query.p, pieces, query.resolution);
}

IntervalSet full_torus(double period) { return IntervalSet::periodic({{0.0, period}}, period); }

std::vector<long long> lattice_indices(const BandSpec& spec, double period) {
  std::vector<long long> out;
  for (std::size_t k = 0; k < spec.count(); ++k) {
    const Interval band = spec.band(k);
    const auto first = static_cast<long long>(std::floor(band.lo * period / kTwoPi)) - 1;
    const auto last = static_cast<long long>(std::ceil(band.hi * period / kTwoPi)) + 1;
    for (long long m = first; m <= last; ++m) {
      if (within(kTwoPi * static_cast<double>(m) / period, band)) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TrigPoly random_bandlimited(const BandSpec& spec, double period, std::size_t budget, std::uint64_t seed) {
  for (std::size_t k = 0; k < spec.count(); ++k) {
    if (lattice_indices(BandSpec({spec.centers()[k]}, spec.width()), period).empty()) {
      throw Error(ErrorCode::EmptyBand, "band " + std::to_string(k) + " contains no lattice frequency");
    }
  }
  auto indices = lattice_indices(spec, period);
  std::mt19937_64 rng(seed);
  if (budget > 0 && indices.size() > budget) {
    std::shuffle(indices.begin(), indices.end(), rng);
    indices.resize(budget);
    std::sort(indices.begin(), indices.end());
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Term> terms;
  terms.reserve(indices.size());
  for (long long m : indices) {
    const double re = normal(rng);
    const double im = normal(rng);
    terms.push_back({m, {re, im}});
  }
  return TrigPoly(period, std::move(terms));
}

double bernstein_ratio(const TrigPoly& f, Exponent p) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroFunction, "Bernstein ratio of the zero function");
  const Interval torus{0.0, f.period()};
  const std::span pieces(&torus, 1);
  const double base = lp_norm(f, p, pieces);
  if (f.max_frequency() == 0.0) return 0.0;
  return lp_norm(f.derivative(1), p, pieces) / base;
}

nlohmann::json to_json(const TrigPoly& f) {
  auto terms = nlohmann::json::array();
  for (const auto& t : f.terms()) terms.push_back({t.index, t.coefficient.real(), t.coefficient.imag()});
  return {{"L", f.period()}, {"terms", std::move(terms)}};
}

TrigPoly trig_poly_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("L") || !doc["L"].is_number() || !doc.contains("terms") ||
      !doc["terms"].is_array()) {
    throw Error(ErrorCode::Config, "trig polynomial needs numeric \"L\" and a \"terms\" array");
  }
  std::vector<Term> terms;
  for (const auto& row : doc["terms"]) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number() ||
        !row[2].is_number()) {
      throw Error(ErrorCode::Config, "each term must be [m (integer), re, im]");
    }
    terms.push_back({row[0].get<long long>(), {row[1].get<double>(), row[2].get<double>()}});
  }
  return TrigPoly(doc["L"].get<double>(), std::move(terms));
}

}  // namespace thickset
