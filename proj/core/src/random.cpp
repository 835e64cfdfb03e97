#include "qtmc/random.hpp"

#include <cmath>

namespace qtmc {

double SeededRng::uniform() {
  // 53 uniform bits; in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

double SeededRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log1p(-u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> SeededRng::complex_gaussian() {
  return {gaussian() * M_SQRT1_2, gaussian() * M_SQRT1_2};
}

std::uint64_t SeededRng::derive_seed(std::uint64_t master, std::uint64_t task) {
  // splitmix64 step on master ^ golden-ratio-spread task index
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector haar_random_state(Index dim, SeededRng& rng) {
  if (dim < 1) throw ValidationError("haar_random_state: dim must be positive");
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  double n = v.norm();
  while (n == 0.0) {  // probability zero, but keep the contract total
    for (Index i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
    n = v.norm();
  }
  return v / n;
}

Vector haar_random_state(Index dim, std::uint64_t seed) {
  SeededRng rng(seed);
  return haar_random_state(dim, rng);
}

Vector haar_state_in_span(const Matrix& orthonormal_columns, SeededRng& rng) {
  Index k = orthonormal_columns.cols();
  if (k < 1) throw ValidationError("haar_state_in_span: empty basis");
  Vector c(k);
  for (Index i = 0; i < k; ++i) c(i) = rng.complex_gaussian();
  Vector v = orthonormal_columns * c;
  return v / v.norm();
}

UnitaryOperator random_unitary(Index dim, SeededRng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase freedom so the distribution is Haar.
  for (Index j = 0; j < dim; ++j) {
    std::complex<double> d = r(j, j);
    q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
  }
  return UnitaryOperator(std::move(q));
}

DensityMatrix random_density_matrix(Index dim, SeededRng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  Matrix w = g * g.adjoint();
  return DensityMatrix(w / w.trace().real());
}

HermitianOperator random_hermitian(Index dim, SeededRng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  return HermitianOperator(0.5 * (g + g.adjoint().eval()));
}

}  // namespace qtmc
