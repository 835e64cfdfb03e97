#include "qtmc/entropy.hpp"

#include <cmath>
#include <limits>

namespace qtmc {

double shannon_entropy(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > kSupportTol) s -= p(i) * std::log(p(i));
  return s;
}

double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return shannon_entropy(es.eigenvalues());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw ShapeError("relative_entropy: dimension mismatch");
  HermEigen er = herm_eigen(rho);
  HermEigen es = herm_eigen(sigma);

  // tr[rho ln sigma] = sum_k ln(s_k) <e_k|rho|e_k>; support leak means +inf.
  double tr_rho_ln_sigma = 0.0;
  for (Index k = 0; k < es.values.size(); ++k) {
    double weight = (es.vectors.col(k).adjoint() * rho * es.vectors.col(k))(0, 0).real();
    if (es.values(k) > kSupportTol) {
      tr_rho_ln_sigma += weight * std::log(es.values(k));
    } else if (weight > 1e-10) {
      return std::numeric_limits<double>::infinity();
    }
  }
  double tr_rho_ln_rho = -shannon_entropy(er.values);
  double d = tr_rho_ln_rho - tr_rho_ln_sigma;
  return d < 0.0 ? 0.0 : d;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw ShapeError("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

double expectation(const Matrix& q, const Matrix& rho) {
  if (q.rows() != rho.rows()) throw ShapeError("expectation: dimension mismatch");
  std::complex<double> tr = (q * rho).trace();
  if (std::abs(tr.imag()) >= 1e-10)
    throw ValidationError("expectation: trace has a non-negligible imaginary part");
  return tr.real();
}

double expectation(const HermitianOperator& q, const DensityMatrix& rho) {
  return expectation(q.matrix(), rho.matrix());
}

}  // namespace qtmc
