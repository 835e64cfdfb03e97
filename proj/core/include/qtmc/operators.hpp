#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qtmc/errors.hpp"

namespace qtmc {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kSupportTol = 1e-12;

/// Largest singular value, computed as sqrt(lambda_max(M^dag M)).
double operator_norm(const Matrix& m);

/// A finite-dimensional self-adjoint observable. Hermiticity is checked at
/// construction (entrywise, 1e-12); operations may assume it afterwards.
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix entries, std::string unit = "");

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const std::string& unit() const { return unit_; }

private:
  Matrix entries_;
  std::string unit_;
};

/// A unit-trace positive operator: the state of a subsystem or composite.
class DensityMatrix {
public:
  explicit DensityMatrix(Matrix entries);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix basis_state(Index dim, Index k);

private:
  Matrix entries_;
};

class UnitaryOperator {
public:
  explicit UnitaryOperator(Matrix entries);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  static UnitaryOperator identity(Index dim);
  /// Swap of two full tensor factors of dimension d each.
  static UnitaryOperator swap(Index d);
  /// Identity with basis states i and j exchanged.
  static UnitaryOperator two_level_swap(Index dim, Index i, Index j);

private:
  Matrix entries_;
};

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();
HermitianOperator identity_op(Index dim);

Matrix kron(const Matrix& a, const Matrix& b);

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
UnitaryOperator tensor_product(const UnitaryOperator& a, const UnitaryOperator& b);

/// Reduced state on the kept factors. `dims` are the tensor-factor dimensions
/// in order; their product must equal rho.dim.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Index>& dims,
                            const std::vector<Index>& keep);

/// Partial trace on a raw matrix (no density-matrix validation of the input).
Matrix partial_trace_matrix(const Matrix& m, const std::vector<Index>& dims,
                            const std::vector<Index>& keep);

struct Commutator {
  Matrix matrix;
  double operator_norm() const;
};

Commutator commutator(const HermitianOperator& a, const HermitianOperator& b);
Matrix commutator_matrix(const Matrix& a, const Matrix& b);

/// exp(a) for Hermitian a via eigendecomposition; Hermitian positive definite.
Matrix herm_exp(const HermitianOperator& a);
Matrix herm_exp(const Matrix& a);

/// exp(-i t h) for Hermitian h.
UnitaryOperator evolution_unitary(const HermitianOperator& h, double t);

/// Eigendecomposition of a Hermitian matrix, ascending eigenvalues.
struct HermEigen {
  Eigen::VectorXd values;
  Matrix vectors;
};
HermEigen herm_eigen(const Matrix& a);

/// I (x) ... (x) op (x) ... (x) I with op acting on the given factor.
Matrix embed_at(const Matrix& op, size_t factor, const std::vector<Index>& dims);

/// n-fold Kronecker power.
Matrix kron_power(const Matrix& m, Index n);

}  // namespace qtmc
