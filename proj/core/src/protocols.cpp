#include "qtmc/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace qtmc {

namespace {

constexpr double kCommuteTol = 1e-10;

// Common eigenbasis of a pairwise-commuting Hermitian family, by recursive
// refinement of degenerate blocks. Returns the basis and each operator's
// diagonal in it.
struct CommonBasis {
  Matrix basis;
  std::vector<Eigen::VectorXd> values;
};

CommonBasis common_eigenbasis(const std::vector<Matrix>& charges) {
  const Index d = charges.front().rows();
  Matrix v = Matrix::Identity(d, d);
  std::vector<std::pair<Index, Index>> blocks{{0, d}};  // [begin, end)

  for (const Matrix& q : charges) {
    std::vector<std::pair<Index, Index>> next;
    for (auto [b, e] : blocks) {
      Index n = e - b;
      if (n == 1) {
        next.emplace_back(b, e);
        continue;
      }
      Matrix sub = v.middleCols(b, n).adjoint() * q * v.middleCols(b, n);
      HermEigen es = herm_eigen(sub);
      v.middleCols(b, n) = (v.middleCols(b, n) * es.vectors).eval();
      Index start = b;
      for (Index i = 1; i < n; ++i) {
        if (es.values(i) - es.values(i - 1) > 1e-9) {
          next.emplace_back(start, b + i);
          start = b + i;
        }
      }
      next.emplace_back(start, e);
    }
    blocks = std::move(next);
  }

  CommonBasis out;
  out.basis = v;
  for (const Matrix& q : charges) {
    Eigen::VectorXd diag(d);
    for (Index i = 0; i < d; ++i) diag(i) = (v.col(i).adjoint() * q * v.col(i))(0, 0).real();
    out.values.push_back(std::move(diag));
  }
  return out;
}

Eigen::VectorXd thermal_populations(const Eigen::VectorXd& r) {
  Eigen::VectorXd w = (-(r.array() - r.minCoeff())).exp();
  return w / w.sum();
}

void require_commuting_particle(const ChargeSystem& cs, const char* who) {
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i + 1; j < cs.size(); ++j)
      if (commutator(cs.charges[i], cs.charges[j]).operator_norm() >= kCommuteTol)
        throw NonCommutingBath(std::string(who) + ": bath particle charges do not commute");
}

}  // namespace

BathModel::BathModel(ChargeSystem particle, Index n)
    : particle_charges(std::move(particle)), copies(n) {
  if (copies < 1) throw ValidationError("BathModel: copies must be >= 1");
}

DensityMatrix BathModel::particle_state() const { return build_gge(particle_charges).state; }

DensityMatrix BathModel::bath_state() const {
  return DensityMatrix(kron_power(particle_state().matrix(), copies));
}

std::vector<HermitianOperator> BathModel::total_charges() const {
  std::vector<Index> dims(copies, particle_dim());
  Index bath_dim = 1;
  for (Index l = 0; l < copies; ++l) bath_dim *= particle_dim();
  std::vector<HermitianOperator> totals;
  for (const auto& q : particle_charges.charges) {
    Matrix t = Matrix::Zero(bath_dim, bath_dim);
    for (Index l = 0; l < copies; ++l) t += embed_at(q.matrix(), static_cast<size_t>(l), dims);
    totals.emplace_back(std::move(t), q.unit());
  }
  return totals;
}

void WorkLedger::accumulate(const WorkLedger& step) {
  if (delta_system.size() != step.delta_system.size())
    throw ShapeError("WorkLedger::accumulate: charge count mismatch");
  for (size_t i = 0; i < work.size(); ++i) {
    delta_system[i] += step.delta_system[i];
    delta_bath[i] += step.delta_bath[i];
    work[i] += step.work[i];
  }
  delta_entropy_system += step.delta_entropy_system;
  delta_entropy_bath += step.delta_entropy_bath;
  free_entropy_change_system += step.free_entropy_change_system;
  free_entropy_change_bath += step.free_entropy_change_bath;
}

ProtocolTrace ProtocolTrace::from_steps(std::vector<WorkLedger> steps,
                                        const std::vector<double>& betas) {
  ProtocolTrace trace;
  size_t k = steps.empty() ? betas.size() : steps.front().work.size();
  trace.cumulative = WorkLedger(k);
  for (const auto& s : steps) trace.cumulative.accumulate(s);
  trace.steps = std::move(steps);
  if (betas.size() != k) throw ShapeError("ProtocolTrace: betas length mismatch");
  double weighted_work = 0.0;
  for (size_t i = 0; i < k; ++i) weighted_work += betas[i] * trace.cumulative.work[i];
  trace.second_law_slack = -trace.cumulative.free_entropy_change_system - weighted_work;
  return trace;
}

std::vector<double> conservation_check(const UnitaryOperator& u,
                                       const std::vector<HermitianOperator>& totals) {
  std::vector<double> norms;
  for (const auto& t : totals) {
    if (t.dim() != u.dim()) throw ShapeError("conservation_check: dimension mismatch");
    norms.push_back(operator_norm(commutator_matrix(u.matrix(), t.matrix())));
  }
  return norms;
}

std::pair<DensityMatrix, WorkLedger> run_unitary(const DensityMatrix& system,
                                                 const BathModel& bath,
                                                 const UnitaryOperator& u) {
  const Index ds = system.dim();
  const Index db = bath.particle_dim();
  if (ds != db)
    throw ShapeError("run_unitary: system must be a copy of the bath particle species");
  Index joint_dim = ds;
  for (Index l = 0; l < bath.copies; ++l) joint_dim *= db;
  if (u.dim() != joint_dim)
    throw ShapeError("run_unitary: unitary does not match system x bath dimensions");

  DensityMatrix bath_before = bath.bath_state();
  Matrix joint = kron(system.matrix(), bath_before.matrix());
  Matrix joint_after = u.matrix() * joint * u.matrix().adjoint();

  std::vector<Index> dims{ds, bath_before.dim()};
  Matrix sys_after = partial_trace_matrix(joint_after, dims, {0});
  Matrix bath_after = partial_trace_matrix(joint_after, dims, {1});

  const auto& cs = bath.particle_charges;
  auto totals = bath.total_charges();
  WorkLedger ledger(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    ledger.delta_system[i] =
        expectation(cs.charges[i].matrix(), sys_after) - expectation(cs.charges[i], system);
    ledger.delta_bath[i] = expectation(totals[i].matrix(), bath_after) -
                           expectation(totals[i].matrix(), bath_before.matrix());
    ledger.work[i] = -ledger.delta_system[i] - ledger.delta_bath[i];
  }
  ledger.delta_entropy_system = von_neumann_entropy(sys_after) - von_neumann_entropy(system);
  ledger.delta_entropy_bath =
      von_neumann_entropy(bath_after) - von_neumann_entropy(bath_before);

  double coupling_s = 0.0, coupling_b = 0.0;
  for (size_t i = 0; i < cs.size(); ++i) {
    coupling_s += cs.betas[i] * ledger.delta_system[i];
    coupling_b += cs.betas[i] * ledger.delta_bath[i];
  }
  ledger.free_entropy_change_system = coupling_s - ledger.delta_entropy_system;
  ledger.free_entropy_change_bath = coupling_b - ledger.delta_entropy_bath;

  return {DensityMatrix(std::move(joint_after)), std::move(ledger)};
}

SecondLawAudit second_law_audit(const ProtocolTrace& trace, const std::vector<double>& betas) {
  if (betas.size() != trace.cumulative.work.size())
    throw ShapeError("second_law_audit: betas length mismatch");
  double lhs = 0.0;
  for (size_t i = 0; i < betas.size(); ++i) lhs += betas[i] * trace.cumulative.work[i];
  double rhs = -trace.cumulative.free_entropy_change_system;
  return SecondLawAudit{lhs, rhs, rhs - lhs};
}

ProtocolTrace extraction_protocol(const DensityMatrix& system, const BathModel& bath,
                                  double delta_p, int max_rounds) {
  if (!(delta_p > 0.0 && delta_p < 1.0))
    throw ValidationError("extraction_protocol: delta_p must lie in (0, 1)");
  require_commuting_particle(bath.particle_charges, "extraction_protocol");
  const Index d = bath.particle_dim();
  if (system.dim() != d)
    throw ShapeError("extraction_protocol: system must match the bath particle dimension");

  const auto& cs = bath.particle_charges;
  const size_t k = cs.size();
  double beta_sq = 0.0;
  for (double b : cs.betas) beta_sq += b * b;

  std::vector<Matrix> charge_mats;
  for (const auto& q : cs.charges) charge_mats.push_back(q.matrix());
  CommonBasis basis = common_eigenbasis(charge_mats);

  Eigen::VectorXd r(d);
  for (Index i = 0; i < d; ++i) {
    double ri = 0.0;
    for (size_t kk = 0; kk < k; ++kk) ri += cs.betas[kk] * basis.values[kk](i);
    r(i) = ri;
  }
  Eigen::VectorXd q_pop = thermal_populations(r);

  std::vector<WorkLedger> steps;
  bool aligned = false;

  // System populations in the joint charge eigenbasis; coherences are removed
  // by an explicit basis-alignment unitary booked as step 0.
  Matrix rho_in_basis = basis.basis.adjoint() * system.matrix() * basis.basis;
  Eigen::VectorXd p = rho_in_basis.diagonal().real();
  double offdiag = (rho_in_basis - Matrix(rho_in_basis.diagonal().asDiagonal())).norm();
  if (offdiag > 1e-10) {
    HermEigen es = herm_eigen(system.matrix());
    // Largest population onto the most thermally favored level.
    std::vector<Index> order(d);
    for (Index i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return q_pop(a) > q_pop(b); });
    Eigen::VectorXd aligned_p = Eigen::VectorXd::Zero(d);
    for (Index i = 0; i < d; ++i) aligned_p(order[i]) = es.values(d - 1 - i);

    WorkLedger step(k);
    for (size_t kk = 0; kk < k; ++kk) {
      double before = expectation(cs.charges[kk], system);
      double after = basis.values[kk].dot(aligned_p);
      step.delta_system[kk] = after - before;
      step.work[kk] = -step.delta_system[kk];
    }
    double coupling = 0.0;
    for (size_t kk = 0; kk < k; ++kk) coupling += cs.betas[kk] * step.delta_system[kk];
    step.free_entropy_change_system = coupling;  // spectrum unchanged, dS = 0
    steps.push_back(std::move(step));
    p = aligned_p;
    aligned = true;
  }

  auto trace_dist = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return 0.5 * (a - b).cwiseAbs().sum();
  };

  for (int round = 0; round < max_rounds; ++round) {
    if (trace_dist(p, q_pop) < delta_p) break;

    // Most off-ratio pair: maximize |p_a q_b - p_b q_a|.
    Index a = -1, b = -1;
    double best = 0.0;
    for (Index i = 0; i < d; ++i) {
      for (Index j = i + 1; j < d; ++j) {
        double cross = p(i) * q_pop(j) - p(j) * q_pop(i);
        if (std::abs(cross) > best) {
          best = std::abs(cross);
          if (cross > 0) {
            a = i;
            b = j;
          } else {
            a = j;
            b = i;
          }
        }
      }
    }
    if (a < 0) break;  // populations already proportional to thermal

    double gap = (p(a) * q_pop(b) - p(b) * q_pop(a)) / (q_pop(a) + q_pop(b));
    double delta = std::min(delta_p, gap);

    // Fresh two-level particle, thermal at the same beta, with spectrum chosen
    // so its populations equal the round's intermediate target on the pair.
    double t = p(a) + p(b);
    Eigen::Vector2d g((p(a) - delta) / t, (p(b) + delta) / t);
    g = g.cwiseMax(1e-15);
    g /= g.sum();
    Eigen::Vector2d r_matched(-std::log(g(0)), -std::log(g(1)));

    std::vector<Matrix> matched(k);
    for (size_t kk = 0; kk < k; ++kk) {
      Eigen::Vector2d lev = Eigen::Vector2d::Zero();
      if (beta_sq > 1e-30) lev = (cs.betas[kk] / beta_sq) * r_matched;
      matched[kk] = lev.cast<std::complex<double>>().asDiagonal();
    }

    // Joint simulation on system (x) matched particle; the coupled levels
    // |a,1> and |b,0> hold populations differing by exactly delta.
    Matrix joint = kron(Matrix(p.cast<std::complex<double>>().asDiagonal()),
                        Matrix(g.cast<std::complex<double>>().asDiagonal()));
    UnitaryOperator u = UnitaryOperator::two_level_swap(2 * d, 2 * a + 1, 2 * b + 0);
    Matrix joint_after = u.matrix() * joint * u.matrix().adjoint();
    std::vector<Index> dims{d, 2};
    Matrix sys_after = partial_trace_matrix(joint_after, dims, {0});
    Matrix bath_after = partial_trace_matrix(joint_after, dims, {1});
    Matrix bath_before = g.cast<std::complex<double>>().asDiagonal();

    WorkLedger step(k);
    for (size_t kk = 0; kk < k; ++kk) {
      double ds_k = sys_after.diagonal().real().dot(basis.values[kk]) - p.dot(basis.values[kk]);
      step.delta_system[kk] = ds_k;
      step.delta_bath[kk] =
          expectation(matched[kk], bath_after) - expectation(matched[kk], bath_before);
      step.work[kk] = -step.delta_system[kk] - step.delta_bath[kk];
    }
    step.delta_entropy_system =
        von_neumann_entropy(sys_after) - shannon_entropy(p);
    step.delta_entropy_bath =
        von_neumann_entropy(bath_after) - shannon_entropy(g);
    double cs_sum = 0.0, cb_sum = 0.0;
    for (size_t kk = 0; kk < k; ++kk) {
      cs_sum += cs.betas[kk] * step.delta_system[kk];
      cb_sum += cs.betas[kk] * step.delta_bath[kk];
    }
    step.free_entropy_change_system = cs_sum - step.delta_entropy_system;
    step.free_entropy_change_bath = cb_sum - step.delta_entropy_bath;
    steps.push_back(std::move(step));

    p = sys_after.diagonal().real();
  }

  ProtocolTrace trace = ProtocolTrace::from_steps(std::move(steps), cs.betas);
  trace.basis_aligned = aligned;
  return trace;
}

WorkLedger trade_resources(const BathModel& bath, std::pair<Index, Index> level_pair) {
  require_commuting_particle(bath.particle_charges, "trade_resources");
  const auto& cs = bath.particle_charges;
  const Index d = bath.particle_dim();
  auto [i, j] = level_pair;
  if (i < 0 || j < 0 || i >= d || j >= d || i == j)
    throw IndexError("trade_resources: invalid level pair");

  std::vector<Matrix> charge_mats;
  for (const auto& q : cs.charges) charge_mats.push_back(q.matrix());
  CommonBasis basis = common_eigenbasis(charge_mats);

  Eigen::VectorXd r(d);
  for (Index lev = 0; lev < d; ++lev) {
    double rl = 0.0;
    for (size_t kk = 0; kk < cs.size(); ++kk) rl += cs.betas[kk] * basis.values[kk](lev);
    r(lev) = rl;
  }
  Eigen::VectorXd q_pop = thermal_populations(r);
  Eigen::VectorXd q_swapped = q_pop;
  std::swap(q_swapped(i), q_swapped(j));

  WorkLedger ledger(cs.size());
  const double n = static_cast<double>(bath.copies);
  for (size_t kk = 0; kk < cs.size(); ++kk) {
    double per_copy = basis.values[kk].dot(q_swapped - q_pop);
    ledger.delta_bath[kk] = n * per_copy;
    ledger.work[kk] = -ledger.delta_bath[kk];
  }
  ledger.delta_entropy_bath = n * (shannon_entropy(q_swapped) - shannon_entropy(q_pop));
  double coupling = 0.0;
  for (size_t kk = 0; kk < cs.size(); ++kk) coupling += cs.betas[kk] * ledger.delta_bath[kk];
  ledger.free_entropy_change_bath = coupling - ledger.delta_entropy_bath;
  return ledger;
}

BatteryLadder::BatteryLadder(Index levels_, double unit_)
    : levels(levels_),
      unit(unit_),
      position_observable([&] {
        if (levels_ < 3) throw ValidationError("BatteryLadder: needs at least 3 levels");
        Eigen::VectorXd x(levels_);
        for (Index l = 0; l < levels_; ++l) x(l) = unit_ * static_cast<double>(l);
        return HermitianOperator(Matrix(x.cast<std::complex<double>>().asDiagonal()));
      }()) {}

UnitaryOperator BatteryLadder::translation(int steps) const {
  Matrix g = Matrix::Zero(levels, levels);
  for (Index x = 0; x < levels; ++x) {
    Index y = ((x + steps) % levels + levels) % levels;
    g(y, x) = 1.0;
  }
  return UnitaryOperator(std::move(g));
}

UnitaryOperator build_translation_invariant_unitary(Index system_bath_dim,
                                                    const BatteryLadder& battery,
                                                    const std::vector<int>& shift_map,
                                                    LadderWindow support,
                                                    const std::vector<Index>& system_perm) {
  if (static_cast<Index>(shift_map.size()) != system_bath_dim)
    throw ShapeError("build_translation_invariant_unitary: shift_map size mismatch");
  if (support.lo < 0 || support.hi < support.lo || support.hi >= battery.levels)
    throw ValidationError("build_translation_invariant_unitary: bad support window");

  std::vector<Index> perm(system_bath_dim);
  if (system_perm.empty()) {
    for (Index m = 0; m < system_bath_dim; ++m) perm[m] = m;
  } else {
    if (static_cast<Index>(system_perm.size()) != system_bath_dim)
      throw ShapeError("build_translation_invariant_unitary: system_perm size mismatch");
    std::vector<bool> seen(system_bath_dim, false);
    for (Index m = 0; m < system_bath_dim; ++m) {
      Index t = system_perm[m];
      if (t < 0 || t >= system_bath_dim || seen[t])
        throw ValidationError("build_translation_invariant_unitary: system_perm not a bijection");
      seen[t] = true;
      perm[m] = t;
    }
  }

  for (int s : shift_map) {
    if (support.lo + s < 0 || support.hi + s > battery.levels - 1)
      throw BoundaryViolation(
          "build_translation_invariant_unitary: shift carries the support window off the ladder");
  }

  const Index ld = battery.levels;
  Matrix u = Matrix::Zero(system_bath_dim * ld, system_bath_dim * ld);
  for (Index m = 0; m < system_bath_dim; ++m)
    u.block(perm[m] * ld, m * ld, ld, ld) = battery.translation(shift_map[m]).matrix();
  return UnitaryOperator(std::move(u));
}

Matrix window_projector(Index system_bath_dim, const BatteryLadder& battery,
                        LadderWindow window) {
  Matrix p = Matrix::Zero(battery.levels, battery.levels);
  for (Index x = window.lo; x <= window.hi; ++x) p(x, x) = 1.0;
  return kron(Matrix::Identity(system_bath_dim, system_bath_dim), p);
}

double entropy_monotonicity_check(const DensityMatrix& system_bath,
                                  const DensityMatrix& battery_state,
                                  const UnitaryOperator& u) {
  if (u.dim() != system_bath.dim() * battery_state.dim())
    throw ShapeError("entropy_monotonicity_check: dimension mismatch");
  Matrix joint = kron(system_bath.matrix(), battery_state.matrix());
  Matrix joint_after = u.matrix() * joint * u.matrix().adjoint();
  Matrix sb_after =
      partial_trace_matrix(joint_after, {system_bath.dim(), battery_state.dim()}, {0});
  return von_neumann_entropy(sb_after) - von_neumann_entropy(system_bath);
}

}  // namespace qtmc
