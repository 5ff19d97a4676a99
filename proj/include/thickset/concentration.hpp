#pragma once

#include <span>
#include <string>
#include <vector>

#include "thickset/bounds.hpp"
#include "thickset/interval_set.hpp"
#include "thickset/trig_poly.hpp"

namespace thickset {

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double frobenius_norm() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a Hermitian matrix; stops once the off-diagonal
/// Frobenius mass is at most `tolerance`·‖A‖_F.
HermitianEigen hermitian_eigen(ComplexMatrix matrix, double tolerance = 1e-13);

/// G_jk = (1/L) ∫_E exp(i 2π (m_j - m_k) x / L) dx over one torus period.
struct GramMatrix {
  std::vector<long long> frequencies;
  double period = 1.0;
  ComplexMatrix entries;
};

inline constexpr std::size_t kMaxGramSize = 2000;

GramMatrix gram_matrix(std::span<const long long> frequencies, const IntervalSet& set, double period);

struct Concentration {
  double lambda_min = 0.0;
  std::vector<Complex> witness;  // unit coefficient vector attaining lambda_min
  std::string method;            // "gram", "factored" or "factored_floor"
};

/// Smallest eigenvalue of the Gram matrix: min ‖f‖²_{L²(E)} / ‖f‖²_{L²(torus)}
/// over f spanned by the given frequencies.
Concentration min_concentration(std::span<const long long> frequencies, const IntervalSet& set, double period);

/// Same quantity as σ_min² of the quadrature factor W^{1/2}Φ (one-sided
/// Jacobi SVD after a Householder QR). Resolves eigenvalues far below the Gram
/// route's round-off floor.
Concentration min_concentration_factored(std::span<const long long> frequencies, const IntervalSet& set,
                                         double period);

/// Below this the Gram route's eigenvalue is round-off and the factored route is used.
inline constexpr double kGramResolutionFloor = 1e-11;
/// σ_min of the factor is resolved only down to about 1e-15 σ_max (σ_max <= 1),
/// so smaller eigenvalues are reported with method "factored_floor".
inline constexpr double kFactoredResolutionFloor = 1e-28;

struct SharpnessReport {
  double gamma = 0.0;
  double a = 1.0;
  double b = 0.0;
  std::size_t frequency_count = 0;
  double lambda_min = 0.0;
  double exact = 0.0;  // sqrt(lambda_min)
  BoundValue bound;
  double log_margin = 0.0;  // log(exact / bound)
  std::string method;
};

/// Compares the exact p = 2 constant for the lattice frequencies in the
/// bands with the closed-form lower bound at thickness window `a`.
SharpnessReport sharpness_gap(const BandSpec& spec, const IntervalSet& set, double period, double a = 1.0,
                              const BoundConstants& k = {});

}  // namespace thickset
