#include "qtmc/gge.hpp"

#include <cmath>

namespace qtmc {

ChargeSystem::ChargeSystem(std::vector<HermitianOperator> q, std::vector<double> b)
    : charges(std::move(q)), betas(std::move(b)) {
  if (charges.empty()) throw ValidationError("ChargeSystem: needs at least one charge");
  if (charges.size() != betas.size())
    throw ValidationError("ChargeSystem: betas length must match charges length");
  for (const auto& c : charges)
    if (c.dim() != charges.front().dim())
      throw ShapeError("ChargeSystem: all charges must share one dimension");
}

Matrix ChargeSystem::weighted_charge() const {
  Matrix r = Matrix::Zero(dim(), dim());
  for (size_t i = 0; i < charges.size(); ++i) r += betas[i] * charges[i].matrix();
  return r;
}

namespace {

// Thermal eigenvalues and ln Z from the spectrum of R, overflow-safe.
struct ThermalSpectrum {
  Eigen::VectorXd populations;
  double log_partition;
};

ThermalSpectrum thermal_from_r_values(const Eigen::VectorXd& r) {
  double rmin = r.minCoeff();
  Eigen::VectorXd w = (-(r.array() - rmin)).exp();
  double total = w.sum();
  return {w / total, std::log(total) - rmin};
}

}  // namespace

GGEState build_gge(const ChargeSystem& cs) {
  HermEigen e = herm_eigen(cs.weighted_charge());
  ThermalSpectrum th = thermal_from_r_values(e.values);
  Matrix tau = e.vectors * th.populations.asDiagonal() * e.vectors.adjoint();
  return GGEState{cs, DensityMatrix(std::move(tau)), th.log_partition};
}

double free_entropy(const ChargeSystem& cs, const Matrix& rho) {
  if (rho.rows() != cs.dim()) throw ShapeError("free_entropy: dimension mismatch");
  double coupling = 0.0;
  for (size_t i = 0; i < cs.size(); ++i)
    coupling += cs.betas[i] * expectation(cs.charges[i].matrix(), rho);
  return coupling - von_neumann_entropy(rho);
}

double free_entropy(const ChargeSystem& cs, const DensityMatrix& rho) {
  return free_entropy(cs, rho.matrix());
}

double free_entropy_gap(const ChargeSystem& cs, const DensityMatrix& rho) {
  GGEState gge = build_gge(cs);
  double gap = free_entropy(cs, rho) - free_entropy(cs, gge.state);
  double div = relative_entropy(rho, gge.state);
  if (std::isinf(div)) return div;
  if (std::abs(gap - div) > 1e-9)
    throw ValidationError("free_entropy_gap: free-entropy and relative-entropy routes disagree");
  return gap;
}

std::pair<std::vector<double>, SolveDiagnostics> solve_beta(
    const std::vector<HermitianOperator>& charges, const std::vector<double>& targets,
    const SolveOptions& opts) {
  const size_t k = charges.size();
  if (k == 0) throw ValidationError("solve_beta: needs at least one charge");
  if (targets.size() != k) throw ShapeError("solve_beta: targets length mismatch");
  if (opts.tol <= 0) throw ValidationError("solve_beta: tol must be positive");
  for (const auto& c : charges)
    if (c.dim() != charges.front().dim()) throw ShapeError("solve_beta: charge dims differ");

  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(targets.data(), k);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);

  // Dual value and gradient at beta: f = ln Z + beta.v, grad_i = v_i - <Q_i>_tau.
  auto evaluate = [&](const Eigen::VectorXd& b, Eigen::VectorXd* grad) {
    std::vector<double> bv(b.data(), b.data() + k);
    ChargeSystem cs(charges, bv);
    GGEState gge = build_gge(cs);
    if (grad) {
      for (size_t i = 0; i < k; ++i)
        (*grad)(i) = v(i) - expectation(charges[i], gge.state);
    }
    return gge.log_partition + b.dot(v);
  };

  Eigen::VectorXd grad(k);
  double f = evaluate(beta, &grad);
  double step = 1.0;  // last certified step size
  SolveDiagnostics diag;

  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;

  Eigen::VectorXd prev_beta = beta;
  Eigen::VectorXd prev_grad = grad;
  bool have_history = false;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    double gnorm = grad.cwiseAbs().maxCoeff();
    if (gnorm < opts.tol) {
      diag.iterations = iter;
      diag.gradient_norm = gnorm;
      diag.dual_value = f;
      return {{beta.data(), beta.data() + k}, diag};
    }
    if (beta.norm() > opts.beta_cap)
      throw Infeasible("solve_beta: beta exceeded the norm cap; targets outside the achievable set");

    // Barzilai-Borwein trial step adapts to the local curvature; Armijo
    // backtracking keeps the descent monotone.
    double t = 2.0 * step;
    if (have_history) {
      Eigen::VectorXd s = beta - prev_beta;
      Eigen::VectorXd y = grad - prev_grad;
      double sy = s.dot(y);
      double yy = y.squaredNorm();
      if (sy > 0 && yy > 0) t = std::min(std::max(sy / yy, 1e-12), 1e6);
    }
    prev_beta = beta;
    prev_grad = grad;
    have_history = true;

    double g2 = grad.squaredNorm();
    double fp_floor = 1e-15 * (std::abs(f) + 1.0);
    while (true) {
      double required = kArmijo * t * g2;
      if (required < fp_floor) {
        // The sufficient-decrease test is below double resolution; the exact
        // gradient still points downhill, so take the step uncertified.
        beta -= t * grad;
        break;
      }
      Eigen::VectorXd trial = beta - t * grad;
      double ft = evaluate(trial, nullptr);
      if (ft <= f - required) {
        beta = trial;
        step = t;
        break;
      }
      t *= kShrink;
      if (t < 1e-18)
        throw Infeasible("solve_beta: line search collapsed without progress");
    }
    f = evaluate(beta, &grad);
  }
  throw Infeasible("solve_beta: max_iter reached with non-vanishing gradient");
}

Matrix pancake_map(const Matrix& rho) {
  Matrix sx = pauli_x().matrix();
  Matrix sy = pauli_y().matrix();
  return 0.5 * (Matrix::Identity(2, 2) * rho.trace() + sx * (sx * rho).trace() +
                sy * (sy * rho).trace());
}

ChoiCheck pancake_choi_check() {
  // Choi state (1/2) sum_ij E_ij (x) Phi(E_ij) from the four basis inputs.
  Matrix choi = Matrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      Matrix eij = Matrix::Zero(2, 2);
      eij(i, j) = 1.0;
      choi += 0.5 * kron(eij, pancake_map(eij));
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi, Eigen::EigenvaluesOnly);
  return ChoiCheck{std::move(choi), es.eigenvalues().minCoeff()};
}

}  // namespace qtmc
