#pragma once

#include "qtmc/protocols.hpp"

namespace qtmc {

/// Full accounting of one erasure run. The balance
///   weighted_heat = -delta_S_system + mutual_information + bath_relative_entropy
/// holds exactly; the relative-entropy term is what the large-bath limit drops.
struct ErasureReport {
  double delta_S_system = 0.0;
  double mutual_information = 0.0;
  std::vector<double> heat_flows;  // tr[Q_i (rho'_B - tau_B)] per charge
  double weighted_heat = 0.0;      // sum_i beta_i <Q_i>
  double bath_relative_entropy = 0.0;
  double erasure_quality = 0.0;  // trace distance of the final system to the target
};

/// rho'_SB = U (rho_S (x) tau_B) U^dag with every report field filled from the
/// marginals. The system dimension is free (it need not match the particle).
ErasureReport erase(const DensityMatrix& system, const BathModel& bath,
                    const UnitaryOperator& u, const DensityMatrix& target);

struct LandauerCheck {
  double lhs;  // weighted heat
  double rhs;  // -delta_S_system
  bool satisfied;
};
LandauerCheck landauer_bound_check(const ErasureReport& report);

/// S(rho_S) + S(rho_B) - S(rho_SB), >= 0.
double mutual_information(const DensityMatrix& joint, Index dim_s, Index dim_b);

/// The two terms of dS_B = sum_i beta_i tr[Q_i (rho'_B - tau_B)] - D(rho'_B||tau_B);
/// their difference is checked against the direct entropy change to 1e-9.
std::pair<double, double> bath_entropy_decomposition(const GGEState& bath_before,
                                                     const DensityMatrix& bath_after);

}  // namespace qtmc
