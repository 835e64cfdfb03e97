#include "qtmc/operators.hpp"

#include <cmath>

namespace qtmc {

namespace {

using namespace std::complex_literals;

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ValidationError(std::string(what) + ": matrix must be square and nonempty");
}

double max_abs_asymmetry(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

HermitianOperator::HermitianOperator(Matrix entries, std::string unit)
    : entries_(std::move(entries)), unit_(std::move(unit)) {
  check_square(entries_, "HermitianOperator");
  if (max_abs_asymmetry(entries_) > kHermitianTol)
    throw ValidationError("HermitianOperator: entries deviate from self-adjointness");
  // Symmetrize away the sub-tolerance residue so spectral ops see an exact adjoint pair.
  entries_ = 0.5 * (entries_ + entries_.adjoint().eval());
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  check_square(entries_, "DensityMatrix");
  if (max_abs_asymmetry(entries_) > kHermitianTol)
    throw ValidationError("DensityMatrix: entries deviate from self-adjointness");
  entries_ = 0.5 * (entries_ + entries_.adjoint().eval());
  double tr = entries_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw ValidationError("DensityMatrix: trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPositivityTol)
    throw ValidationError("DensityMatrix: negative eigenvalue beyond tolerance");
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  double n = psi.norm();
  if (n <= 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
  Vector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) throw IndexError("DensityMatrix::basis_state: index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

UnitaryOperator::UnitaryOperator(Matrix entries) : entries_(std::move(entries)) {
  check_square(entries_, "UnitaryOperator");
  Matrix dev = entries_ * entries_.adjoint() - Matrix::Identity(entries_.rows(), entries_.cols());
  if (dev.norm() > kUnitaryTol)
    throw ValidationError("UnitaryOperator: U U^dag deviates from identity");
}

UnitaryOperator UnitaryOperator::identity(Index dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim));
}

UnitaryOperator UnitaryOperator::swap(Index d) {
  Matrix m = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(j * d + i, i * d + j) = 1.0;
  return UnitaryOperator(std::move(m));
}

UnitaryOperator UnitaryOperator::two_level_swap(Index dim, Index i, Index j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim)
    throw IndexError("two_level_swap: level out of range");
  Matrix m = Matrix::Identity(dim, dim);
  m(i, i) = 0.0;
  m(j, j) = 0.0;
  m(i, j) = 1.0;
  m(j, i) = 1.0;
  return UnitaryOperator(std::move(m));
}

HermitianOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_y() {
  Matrix m(2, 2);
  m << 0.0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(std::move(m));
}

HermitianOperator identity_op(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b) {
  std::string unit = a.unit().empty() ? b.unit() : a.unit();
  return HermitianOperator(kron(a.matrix(), b.matrix()), std::move(unit));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

UnitaryOperator tensor_product(const UnitaryOperator& a, const UnitaryOperator& b) {
  return UnitaryOperator(kron(a.matrix(), b.matrix()));
}

Matrix partial_trace_matrix(const Matrix& m, const std::vector<Index>& dims,
                            const std::vector<Index>& keep) {
  Index total = 1;
  for (Index d : dims) {
    if (d < 1) throw ShapeError("partial_trace: factor dimensions must be positive");
    total *= d;
  }
  if (total != m.rows() || m.rows() != m.cols())
    throw ShapeError("partial_trace: factor dimensions do not multiply to the matrix size");
  if (keep.empty()) throw ShapeError("partial_trace: keep set must be nonempty");

  const Index n = static_cast<Index>(dims.size());
  std::vector<bool> kept(n, false);
  for (Index k : keep) {
    if (k < 0 || k >= n) throw ShapeError("partial_trace: keep index out of range");
    kept[static_cast<size_t>(k)] = true;
  }

  // Strides of each factor in the row-major composite index.
  std::vector<Index> stride(n, 1);
  for (Index f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<Index> keep_sorted;
  std::vector<Index> traced;
  for (Index f = 0; f < n; ++f) (kept[f] ? keep_sorted : traced).push_back(f);

  Index dim_keep = 1;
  for (Index f : keep_sorted) dim_keep *= dims[f];
  Index dim_traced = 1;
  for (Index f : traced) dim_traced *= dims[f];

  // Composite base index for a multi-index over a factor subset.
  auto base_index = [&](const std::vector<Index>& factors, Index flat) {
    Index idx = 0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      Index d = dims[*it];
      idx += (flat % d) * stride[*it];
      flat /= d;
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (Index r = 0; r < dim_keep; ++r) {
    Index rb = base_index(keep_sorted, r);
    for (Index c = 0; c < dim_keep; ++c) {
      Index cb = base_index(keep_sorted, c);
      std::complex<double> sum = 0.0;
      for (Index t = 0; t < dim_traced; ++t) {
        Index tb = base_index(traced, t);
        sum += m(rb + tb, cb + tb);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Index>& dims,
                            const std::vector<Index>& keep) {
  return DensityMatrix(partial_trace_matrix(rho.matrix(), dims, keep));
}

double Commutator::operator_norm() const { return qtmc::operator_norm(matrix); }

Matrix commutator_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("commutator: dimension mismatch");
  return a * b - b * a;
}

Commutator commutator(const HermitianOperator& a, const HermitianOperator& b) {
  return Commutator{commutator_matrix(a.matrix(), b.matrix())};
}

HermEigen herm_eigen(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return HermEigen{es.eigenvalues(), es.eigenvectors()};
}

Matrix herm_exp(const Matrix& a) {
  HermEigen e = herm_eigen(a);
  Eigen::VectorXd ev = e.values.array().exp();
  return e.vectors * ev.asDiagonal() * e.vectors.adjoint();
}

Matrix herm_exp(const HermitianOperator& a) { return herm_exp(a.matrix()); }

UnitaryOperator evolution_unitary(const HermitianOperator& h, double t) {
  HermEigen e = herm_eigen(h.matrix());
  Vector phases(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k)
    phases(k) = std::exp(std::complex<double>(0, -e.values(k) * t));
  return UnitaryOperator(e.vectors * phases.asDiagonal() * e.vectors.adjoint());
}

Matrix embed_at(const Matrix& op, size_t factor, const std::vector<Index>& dims) {
  if (factor >= dims.size()) throw ShapeError("embed_at: factor index out of range");
  if (op.rows() != dims[factor]) throw ShapeError("embed_at: operator does not fit the factor");
  Matrix out = Matrix::Identity(1, 1);
  for (size_t f = 0; f < dims.size(); ++f) {
    if (f == factor)
      out = kron(out, op);
    else
      out = kron(out, Matrix::Identity(dims[f], dims[f]));
  }
  return out;
}

Matrix kron_power(const Matrix& m, Index n) {
  if (n < 0) throw ShapeError("kron_power: negative power");
  Matrix out = Matrix::Identity(1, 1);
  for (Index i = 0; i < n; ++i) out = kron(out, m);
  return out;
}

}  // namespace qtmc
