#include "qtmc/landauer.hpp"

#include <cmath>

namespace qtmc {

double mutual_information(const DensityMatrix& joint, Index dim_s, Index dim_b) {
  if (dim_s * dim_b != joint.dim()) throw ShapeError("mutual_information: dimension mismatch");
  std::vector<Index> dims{dim_s, dim_b};
  Matrix rho_s = partial_trace_matrix(joint.matrix(), dims, {0});
  Matrix rho_b = partial_trace_matrix(joint.matrix(), dims, {1});
  double mi = von_neumann_entropy(rho_s) + von_neumann_entropy(rho_b) -
              von_neumann_entropy(joint.matrix());
  return mi;
}

ErasureReport erase(const DensityMatrix& system, const BathModel& bath,
                    const UnitaryOperator& u, const DensityMatrix& target) {
  const Index ds = system.dim();
  DensityMatrix tau_b = bath.bath_state();
  if (u.dim() != ds * tau_b.dim())
    throw ShapeError("erase: unitary does not match system x bath dimensions");
  if (target.dim() != ds) throw ShapeError("erase: target dimension mismatch");

  Matrix joint_after =
      u.matrix() * kron(system.matrix(), tau_b.matrix()) * u.matrix().adjoint();
  std::vector<Index> dims{ds, tau_b.dim()};
  Matrix sys_after = partial_trace_matrix(joint_after, dims, {0});
  Matrix bath_after = partial_trace_matrix(joint_after, dims, {1});

  const auto& cs = bath.particle_charges;
  auto totals = bath.total_charges();

  ErasureReport report;
  report.delta_S_system = von_neumann_entropy(sys_after) - von_neumann_entropy(system);
  report.mutual_information = mutual_information(DensityMatrix(joint_after), ds, tau_b.dim());
  for (size_t i = 0; i < cs.size(); ++i) {
    double flow = expectation(totals[i].matrix(), bath_after) -
                  expectation(totals[i].matrix(), tau_b.matrix());
    report.heat_flows.push_back(flow);
    report.weighted_heat += cs.betas[i] * flow;
  }
  report.bath_relative_entropy = relative_entropy(bath_after, tau_b.matrix());
  report.erasure_quality = trace_distance(sys_after, target.matrix());

  double balance = -report.delta_S_system + report.mutual_information +
                   report.bath_relative_entropy;
  if (!std::isinf(report.bath_relative_entropy) &&
      std::abs(report.weighted_heat - balance) > 1e-9)
    throw ValidationError("erase: heat/entropy balance identity failed");
  return report;
}

LandauerCheck landauer_bound_check(const ErasureReport& report) {
  double lhs = report.weighted_heat;
  double rhs = -report.delta_S_system;
  return LandauerCheck{lhs, rhs, lhs >= rhs - 1e-9};
}

std::pair<double, double> bath_entropy_decomposition(const GGEState& bath_before,
                                                     const DensityMatrix& bath_after) {
  const auto& cs = bath_before.charge_system;
  if (bath_after.dim() != cs.dim())
    throw ShapeError("bath_entropy_decomposition: dimension mismatch");
  double coupling = 0.0;
  for (size_t i = 0; i < cs.size(); ++i)
    coupling += cs.betas[i] * (expectation(cs.charges[i], bath_after) -
                               expectation(cs.charges[i], bath_before.state));
  double rel = relative_entropy(bath_after, bath_before.state);
  double direct =
      von_neumann_entropy(bath_after) - von_neumann_entropy(bath_before.state);
  if (!std::isinf(rel) && std::abs((coupling - rel) - direct) > 1e-9)
    throw ValidationError("bath_entropy_decomposition: identity check failed");
  return {coupling, rel};
}

}  // namespace qtmc
