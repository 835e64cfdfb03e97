#pragma once

#include "qtmc/operators.hpp"

namespace qtmc {

/// -sum lambda ln lambda in nats; eigenvalues below 1e-12 drop out of the sum.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Matrix& rho);

/// D(rho||sigma) = tr[rho ln rho - rho ln sigma]; +infinity when the support
/// of rho leaks outside the support of sigma (eigenvalue threshold 1e-12).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double relative_entropy(const Matrix& rho, const Matrix& sigma);

/// Half the trace norm of rho - sigma; in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Re tr(q rho); throws if the imaginary part exceeds 1e-10.
double expectation(const HermitianOperator& q, const DensityMatrix& rho);
double expectation(const Matrix& q, const Matrix& rho);

/// Classical Shannon entropy of a probability vector (same clamping rule).
double shannon_entropy(const Eigen::VectorXd& p);

}  // namespace qtmc
