#pragma once

#include <utility>
#include <vector>

#include "qtmc/gge.hpp"

namespace qtmc {

/// A thermal bath: N independent copies of one particle species, each in the
/// generalized thermal state of `particle_charges`.
struct BathModel {
  ChargeSystem particle_charges;
  Index copies = 1;

  BathModel(ChargeSystem particle, Index n);

  Index particle_dim() const { return particle_charges.dim(); }
  DensityMatrix particle_state() const;
  DensityMatrix bath_state() const;  // particle_state^(x)N
  /// Additive totals sum_l Q_i^(l) on the N-copy bath space.
  std::vector<HermitianOperator> total_charges() const;
};

/// Per-step bookkeeping. `work[i] = -delta_system[i] - delta_bath[i]` holds
/// exactly as computed; everything derives from the step's marginals.
struct WorkLedger {
  std::vector<double> delta_system;
  std::vector<double> delta_bath;
  std::vector<double> work;
  double delta_entropy_system = 0.0;
  double delta_entropy_bath = 0.0;
  double free_entropy_change_system = 0.0;
  double free_entropy_change_bath = 0.0;

  explicit WorkLedger(size_t charge_count = 0)
      : delta_system(charge_count, 0.0),
        delta_bath(charge_count, 0.0),
        work(charge_count, 0.0) {}

  void accumulate(const WorkLedger& step);
};

struct ProtocolTrace {
  std::vector<WorkLedger> steps;
  WorkLedger cumulative;
  double second_law_slack = 0.0;  // -sum beta_i dW_i - dF_s
  bool basis_aligned = false;     // extraction rotated the input into the charge eigenbasis

  static ProtocolTrace from_steps(std::vector<WorkLedger> steps, const std::vector<double>& betas);
};

/// ||[U, total_i]|| per conserved total; the caller decides strictness.
std::vector<double> conservation_check(const UnitaryOperator& u,
                                       const std::vector<HermitianOperator>& totals);

/// Applies u to system (x) bath_state and books the ledger from the marginals.
/// The system must be a copy of the bath particle species (same dimension and
/// same charge operators) so that its charge deltas are well defined.
std::pair<DensityMatrix, WorkLedger> run_unitary(const DensityMatrix& system,
                                                 const BathModel& bath,
                                                 const UnitaryOperator& u);

struct SecondLawAudit {
  double lhs;    // sum beta_i dW_i
  double rhs;    // -dF_s
  double slack;  // rhs - lhs
};
SecondLawAudit second_law_audit(const ProtocolTrace& trace, const std::vector<double>& betas);

/// Thermalizes a population-diagonal system toward tau(beta) in population
/// moves of at most delta_p per round. Each round couples the most off-ratio
/// system level pair to a fresh two-level particle drawn thermal at the same
/// beta with spectrum matched to the intermediate target, and swaps the
/// near-degenerate joint level pair. Bath free entropy rises O(delta_p^2) per
/// round; the terminal second-law deficit is O(delta_p).
ProtocolTrace extraction_protocol(const DensityMatrix& system, const BathModel& bath,
                                  double delta_p, int max_rounds);

/// Population swap of the chosen particle level pair on every bath copy
/// (a unitary on the bath alone). Commuting charges only.
WorkLedger trade_resources(const BathModel& bath, std::pair<Index, Index> level_pair);

/// A work-storage ladder: position observable c * diag(0..L-1).
struct BatteryLadder {
  Index levels;
  double unit;
  HermitianOperator position_observable;

  BatteryLadder(Index levels, double unit);
  /// Cyclic shift by `steps` rungs (unitary; wraps at the edges).
  UnitaryOperator translation(int steps) const;
};

struct LadderWindow {
  Index lo;
  Index hi;
};

/// U = sum_m |perm(m)><m| (x) Gamma^{shift(m)}: a system-conditioned battery
/// translation, optionally composed with a relabeling of the system-bath
/// basis. Commutes with the ladder translation exactly. Throws
/// BoundaryViolation if any shift could carry the declared support window
/// across the ladder edge.
UnitaryOperator build_translation_invariant_unitary(Index system_bath_dim,
                                                    const BatteryLadder& battery,
                                                    const std::vector<int>& shift_map,
                                                    LadderWindow support,
                                                    const std::vector<Index>& system_perm = {});

/// Projector onto system (x) (ladder rungs in [window.lo, window.hi]).
Matrix window_projector(Index system_bath_dim, const BatteryLadder& battery, LadderWindow window);

/// S(tr_battery(U (rho_sb (x) rho_w) U^dag)) - S(rho_sb). Nonnegative for
/// translation-invariant unitaries on initially uncorrelated states.
double entropy_monotonicity_check(const DensityMatrix& system_bath,
                                  const DensityMatrix& battery_state, const UnitaryOperator& u);

}  // namespace qtmc
