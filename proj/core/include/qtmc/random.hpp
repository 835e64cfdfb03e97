#pragma once

#include <cstdint>
#include <random>

#include "qtmc/operators.hpp"

namespace qtmc {

/// Deterministic random source. Uniform and Gaussian variates are generated
/// from the raw mt19937_64 stream directly, so results do not depend on the
/// standard library's distribution implementations.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard real Gaussian (Box-Muller).
  double gaussian();
  /// Standard complex Gaussian (independent re/im, variance 1/2 each).
  std::complex<double> complex_gaussian();

  /// Derive an independent per-task seed from a master seed and task index.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task);

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Normalized vector of iid standard complex Gaussian entries; unitarily
/// invariant in distribution, deterministic for a fixed seed.
Vector haar_random_state(Index dim, std::uint64_t seed);
Vector haar_random_state(Index dim, SeededRng& rng);

/// Haar state inside the span of orthonormal columns (Gaussian coefficients).
Vector haar_state_in_span(const Matrix& orthonormal_columns, SeededRng& rng);

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
UnitaryOperator random_unitary(Index dim, SeededRng& rng);

/// Full-rank random density matrix (normalized Wishart G G^dag / tr).
DensityMatrix random_density_matrix(Index dim, SeededRng& rng);

/// GUE-style random Hermitian operator with entries of order 1.
HermitianOperator random_hermitian(Index dim, SeededRng& rng);

}  // namespace qtmc
