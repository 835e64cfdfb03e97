#pragma once

#include <vector>

#include "qtmc/entropy.hpp"
#include "qtmc/operators.hpp"

namespace qtmc {

/// An ordered list of conserved charges with matched inverse temperatures.
struct ChargeSystem {
  std::vector<HermitianOperator> charges;
  std::vector<double> betas;

  ChargeSystem(std::vector<HermitianOperator> q, std::vector<double> b);

  Index dim() const { return charges.front().dim(); }
  size_t size() const { return charges.size(); }

  /// R = sum_i beta_i Q_i, the observable the thermal state is diagonal in.
  Matrix weighted_charge() const;
};

/// tau(beta) = exp(-sum beta_i Q_i)/Z together with ln Z.
struct GGEState {
  ChargeSystem charge_system;
  DensityMatrix state;
  double log_partition;
};

GGEState build_gge(const ChargeSystem& cs);

/// F~(rho) = sum_i beta_i <Q_i> - S(rho), dimensionless.
double free_entropy(const ChargeSystem& cs, const DensityMatrix& rho);
double free_entropy(const ChargeSystem& cs, const Matrix& rho);

/// F~(rho) - F~(tau). Computed twice (free-entropy difference and relative
/// entropy to tau) and cross-checked to 1e-9 before returning.
double free_entropy_gap(const ChargeSystem& cs, const DensityMatrix& rho);

struct SolveDiagnostics {
  int iterations = 0;
  double gradient_norm = 0.0;  // infinity norm at exit
  double dual_value = 0.0;     // ln Z + beta . v
};

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 100000;
  double beta_cap = 1e3;  // Euclidean cap; exceeding it signals Infeasible
};

/// Solves for beta such that <Q_i> under tau(beta) equals targets[i], by
/// minimizing the convex dual ln Z(beta) + beta . v with gradient descent and
/// Armijo backtracking. Throws Infeasible when the iterates blow past the
/// beta cap or max_iter is exhausted with a non-vanishing gradient.
std::pair<std::vector<double>, SolveDiagnostics> solve_beta(
    const std::vector<HermitianOperator>& charges, const std::vector<double>& targets,
    const SolveOptions& opts = {});

/// Choi state of the qubit map rho -> (I tr(rho) + sx tr(sx rho) + sy tr(sy rho))/2,
/// which projects the Bloch vector onto the X-Y disk. The minimum eigenvalue is
/// negative: the map is not completely positive.
struct ChoiCheck {
  Matrix choi;
  double min_eigenvalue;
};
ChoiCheck pancake_choi_check();

/// The map itself, for direct evaluation on states.
Matrix pancake_map(const Matrix& rho);

}  // namespace qtmc
