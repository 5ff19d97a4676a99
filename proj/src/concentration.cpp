#include "thickset/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "thickset/error.hpp"
#include "thickset/quadrature.hpp"

namespace thickset {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxSweeps = 100;

struct Rotation {
  double c = 1.0;
  double s = 0.0;
  double t = 0.0;
  Complex phase{1.0, 0.0};  // h / |h|
};

// Rotation annihilating the (p, q) entry of the Hermitian 2x2 block
// [[app, h], [conj(h), aqq]], with |h| > 0.
Rotation jacobi_rotation(double app, double aqq, Complex h) {
  const double r = std::abs(h);
  Rotation rot;
  rot.phase = h / r;
  const double theta = (aqq - app) / (2.0 * r);
  if (std::abs(theta) > 1e150) {
    rot.t = 0.5 / theta;
  } else {
    rot.t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  rot.c = 1.0 / std::sqrt(1.0 + rot.t * rot.t);
  rot.s = rot.t * rot.c;
  return rot;
}

std::vector<Interval> torus_pieces(const IntervalSet& set, double period) {
  std::vector<Interval> pieces = set.is_periodic() ? set.clip(0.0, period) : set.intervals();
  if (pieces.empty()) throw Error(ErrorCode::EmptySet, "set does not meet the torus");
  return pieces;
}

void check_frequencies(std::span<const long long> frequencies) {
  if (frequencies.empty()) throw Error(ErrorCode::InvalidArgument, "no frequencies given");
  if (frequencies.size() > kMaxGramSize) {
    throw Error(ErrorCode::SizeLimit, "dense eigensolve limited to " + std::to_string(kMaxGramSize) + " frequencies");
  }
  std::vector<long long> sorted(frequencies.begin(), frequencies.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::DuplicateFrequency, "frequency list contains duplicates");
  }
}

// Householder QR applied in place: afterwards the columns span only their
// first n rows (the triangular factor R), with R^H R equal to the input Gram.
void reduce_to_triangle(std::vector<std::vector<Complex>>& cols) {
  const std::size_t n = cols.size();
  const std::size_t rows = cols.front().size();
  if (rows <= n) return;
  std::vector<Complex> v(rows);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& x = cols[k];
    double norm2 = 0.0;
    for (std::size_t i = k; i < rows; ++i) norm2 += std::norm(x[i]);
    if (norm2 == 0.0) continue;
    const Complex phase = x[k] == Complex{} ? Complex(1.0) : x[k] / std::abs(x[k]);
    const Complex alpha = -phase * std::sqrt(norm2);
    for (std::size_t i = k; i < rows; ++i) v[i] = x[i];
    v[k] -= alpha;
    const double vnorm2 = norm2 - std::norm(x[k]) + std::norm(v[k]);
    for (std::size_t j = k; j < n; ++j) {
      auto& col = cols[j];
      Complex dot;
      for (std::size_t i = k; i < rows; ++i) dot += std::conj(v[i]) * col[i];
      dot *= 2.0 / vnorm2;
      for (std::size_t i = k; i < rows; ++i) col[i] -= dot * v[i];
    }
  }
  for (auto& col : cols) col.resize(n);
}

}  // namespace

double ComplexMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

HermitianEigen hermitian_eigen(ComplexMatrix a, double tolerance) {
  const std::size_t n = a.size();
  ComplexMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double norm = a.frobenius_norm();
  auto off_diagonal = [&a, n] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) sum += std::norm(a(i, j));
      }
    }
    return std::sqrt(sum);
  };

  int sweep = 0;
  while (sweep < kMaxSweeps && off_diagonal() > tolerance * norm) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex h = a(p, q);
        if (h == Complex{}) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Rotation rot = jacobi_rotation(app, aqq, h);
        const Complex back = std::conj(rot.phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = rot.c * akp - rot.s * back * akq;
          a(k, q) = rot.s * akp + rot.c * back * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = rot.c * apk - rot.s * rot.phase * aqk;
          a(q, k) = rot.s * apk + rot.c * rot.phase * aqk;
        }
        const double r = std::abs(h);
        a(p, p) = app - rot.t * r;
        a(q, q) = aqq + rot.t * r;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = rot.c * vkp - rot.s * back * vkq;
          v(k, q) = rot.s * vkp + rot.c * back * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

GramMatrix gram_matrix(std::span<const long long> frequencies, const IntervalSet& set, double period) {
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  check_frequencies(frequencies);
  const auto pieces = torus_pieces(set, period);

  // entries depend only on the index difference
  std::unordered_map<long long, Complex> by_difference;
  auto entry = [&](long long difference) {
    if (auto it = by_difference.find(difference); it != by_difference.end()) return it->second;
    const double kappa = kTwoPi * static_cast<double>(difference) / period;
    Complex sum;
    for (const auto& iv : pieces) {
      if (difference == 0) {
        sum += iv.length();
      } else {
        const double mid = 0.5 * (iv.lo + iv.hi);
        sum += std::polar(2.0 * std::sin(0.5 * kappa * iv.length()) / kappa, kappa * mid);
      }
    }
    sum /= period;
    by_difference.emplace(difference, sum);
    return sum;
  };

  GramMatrix gram{std::vector<long long>(frequencies.begin(), frequencies.end()), period,
                  ComplexMatrix(frequencies.size())};
  const std::size_t n = frequencies.size();
  for (std::size_t j = 0; j < n; ++j) {
    gram.entries(j, j) = entry(0).real();
    for (std::size_t k = j + 1; k < n; ++k) {
      const Complex g = entry(frequencies[j] - frequencies[k]);
      gram.entries(j, k) = g;
      gram.entries(k, j) = std::conj(g);
    }
  }
  return gram;
}

Concentration min_concentration(std::span<const long long> frequencies, const IntervalSet& set, double period) {
  const GramMatrix gram = gram_matrix(frequencies, set, period);
  const HermitianEigen eig = hermitian_eigen(gram.entries);
  Concentration out;
  out.lambda_min = eig.values.front();
  out.method = "gram";
  // G is the transpose of the quadratic form c ↦ ∫_E |Σ c_j e_j|², so the
  // coefficient vector is the conjugate eigenvector.
  out.witness.resize(frequencies.size());
  for (std::size_t i = 0; i < frequencies.size(); ++i) out.witness[i] = std::conj(eig.vectors(i, 0));
  return out;
}

Concentration min_concentration_factored(std::span<const long long> frequencies, const IntervalSet& set,
                                         double period) {
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  check_frequencies(frequencies);
  const auto pieces = torus_pieces(set, period);
  const auto [lo, hi] = std::minmax_element(frequencies.begin(), frequencies.end());
  const double spread = kTwoPi * static_cast<double>(std::max({*hi - *lo, std::abs(*hi), std::abs(*lo)})) / period;
  const double panel = (spread > 0.0 ? std::min(1.0, kTwoPi / spread) : 1.0) / 8.0;
  const auto nodes = quadrature::composite_nodes(pieces, panel);

  const std::size_t n = frequencies.size();
  const std::size_t rows = nodes.x.size();
  // columns of W^{1/2} Φ; Φ^H W Φ is the quadratic form of ∫_E |f|² / L
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(rows));
  for (std::size_t j = 0; j < n; ++j) {
    const double nu = kTwoPi * static_cast<double>(frequencies[j]) / period;
    for (std::size_t q = 0; q < rows; ++q) {
      cols[j][q] = std::polar(std::sqrt(nodes.w[q] / period), nu * nodes.x[q]);
    }
  }
  reduce_to_triangle(cols);
  const std::size_t reduced = cols.front().size();

  ComplexMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex h;
        for (std::size_t i = 0; i < reduced; ++i) {
          alpha += std::norm(cols[p][i]);
          beta += std::norm(cols[q][i]);
          h += std::conj(cols[p][i]) * cols[q][i];
        }
        if (std::abs(h) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Rotation rot = jacobi_rotation(alpha, beta, h);
        const Complex back = std::conj(rot.phase);
        for (std::size_t i = 0; i < reduced; ++i) {
          const Complex up = cols[p][i];
          const Complex uq = cols[q][i];
          cols[p][i] = rot.c * up - rot.s * back * uq;
          cols[q][i] = rot.s * up + rot.c * back * uq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = rot.c * vkp - rot.s * back * vkq;
          v(k, q) = rot.s * vkp + rot.c * back * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double sigma2 = 0.0;
    for (const auto& z : cols[j]) sigma2 += std::norm(z);
    if (sigma2 < best_value) {
      best_value = sigma2;
      best = j;
    }
  }
  Concentration out;
  out.lambda_min = best_value;
  out.method = best_value < kFactoredResolutionFloor ? "factored_floor" : "factored";
  out.witness.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.witness[i] = v(i, best);
  return out;
}

SharpnessReport sharpness_gap(const BandSpec& spec, const IntervalSet& set, double period, double a,
                              const BoundConstants& k) {
  const IntervalSet torus_set =
      set.is_periodic() ? on_torus(set, period) : IntervalSet::periodic(set.intervals(), period);
  const auto frequencies = lattice_indices(spec, period);
  if (frequencies.empty()) throw Error(ErrorCode::EmptyBand, "no lattice frequency inside the bands");

  SharpnessReport report;
  report.a = a;
  report.b = spec.width();
  report.gamma = thickness(torus_set, a).gamma;
  report.frequency_count = frequencies.size();

  Concentration conc = min_concentration(frequencies, torus_set, period);
  if (conc.lambda_min < kGramResolutionFloor) conc = min_concentration_factored(frequencies, torus_set, period);
  report.lambda_min = conc.lambda_min;
  report.method = conc.method;
  report.exact = std::sqrt(std::max(conc.lambda_min, 0.0));

  const double ab = a * spec.width();
  const Exponent two(2.0);
  report.bound = spec.count() == 1 ? theorem1_bound(report.gamma, ab, two, k)
                                   : theorem2_bound(report.gamma, static_cast<int>(spec.count()), ab, two, k);
  report.log_margin = std::log(report.exact) - report.bound.log;
  return report;
}

}  // namespace thickset
