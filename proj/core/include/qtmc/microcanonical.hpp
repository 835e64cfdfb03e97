#pragma once

#include <cstdint>
#include <vector>

#include "qtmc/gge.hpp"

namespace qtmc {

constexpr Index kDimCap = 1024;  // d^N ceiling for N-copy constructions

/// Composite average observables Qbar_i = (1/N) sum_l 1 (x)..(x) Q_i (x)..(x) 1.
struct CompositeChargeSet {
  std::vector<HermitianOperator> base;
  Index copies = 1;
  Index site_dim = 1;
  std::vector<HermitianOperator> composite;

  Index dim() const { return composite.front().dim(); }
  std::vector<Index> site_dims() const { return std::vector<Index>(copies, site_dim); }
};

CompositeChargeSet composite_average(const std::vector<HermitianOperator>& base, Index copies);

struct CommutatorDecayRow {
  Index copies;
  size_t i;
  size_t j;
  double norm;  // ||[Qbar_i, Qbar_j]||
};
std::vector<CommutatorDecayRow> commutator_decay(const std::vector<HermitianOperator>& base,
                                                 const std::vector<Index>& n_range);

/// Exactly commuting surrogates Ybar_j = basis diag_j basis^dag obtained by
/// Jacobi-style joint approximate diagonalization of the composites.
struct CommutingApproximants {
  UnitaryOperator basis;
  std::vector<Eigen::VectorXd> diagonals;
  double residual;                 // root-sum-square off-diagonal mass removed
  std::vector<double> deviation;   // ||Ybar_j - Qbar_j|| per charge
  std::vector<double> sweep_off;   // summed off-diagonal mass after each sweep

  Matrix reconstructed(size_t j) const;
};

/// Minimizes the summed off-diagonal Frobenius mass of all matrices with
/// unitary Givens rotations; terminates when a full sweep improves the mass
/// by less than sweeps_tol.
CommutingApproximants joint_diagonalize_matrices(const std::vector<Matrix>& mats,
                                                 double sweeps_tol = 1e-14);
CommutingApproximants joint_diagonalize(const CompositeChargeSet& composite,
                                        double sweeps_tol = 1e-14);

/// Orthogonal projector onto an (approximate) microcanonical subspace, with
/// its window and tolerance parameters.
struct SubspaceProjector {
  Matrix projector;
  Index dim_subspace = 0;
  std::vector<double> window_center;
  double window_halfwidth = 0.0;
  double sharpness_tolerance = 0.2;  // eta
  Matrix basis;                      // orthonormal columns spanning the subspace
};

/// Spans the joint eigenvectors whose Ybar_j value lies in [v_j - delta, v_j + delta]
/// for every j. Throws EmptyWindow when no eigenvector qualifies.
SubspaceProjector build_ams(const CommutingApproximants& approx, const std::vector<double>& v,
                            double delta, double eta = 0.2);

struct AmsVerification {
  double worst_outside_mass = 0.0;  // property (i), over Haar states inside M
  double mean_outside_mass = 0.0;
  double worst_overlap = 1.0;  // property (ii), over engineered sharp product states
  double mean_overlap = 1.0;
  double widened_halfwidth = 0.0;  // delta' = 2 delta
  bool sharp_statistics_ok = false;
};

AmsVerification verify_ams(const SubspaceProjector& p, const CompositeChargeSet& composite,
                           int trials, std::uint64_t seed);

struct ReducedScanRow {
  Index copies;
  Index dim_subspace;
  double avg_relative_entropy;  // (1/N) sum_l D(reduced_l || tau(beta*))
  std::vector<double> betas;    // MaxEnt fit from Omega's single-site expectations
};

std::vector<ReducedScanRow> reduced_state_scan(const std::vector<HermitianOperator>& base,
                                               const std::vector<double>& v,
                                               const std::vector<Index>& n_range, double delta,
                                               double eta = 0.2);

/// Maximally mixed state on the exact common eigenspace of a commuting charge
/// list; returns the reduced state on the first factor of `system_dims`.
DensityMatrix exact_microcanonical_reduction(const std::vector<HermitianOperator>& charges,
                                             const std::vector<double>& values,
                                             const std::vector<Index>& system_dims);

}  // namespace qtmc
