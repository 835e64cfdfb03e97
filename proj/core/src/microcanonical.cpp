#include "qtmc/microcanonical.hpp"

#include <algorithm>
#include <cmath>

#include "qtmc/random.hpp"

namespace qtmc {

namespace {

Index checked_copy_dim(Index site_dim, Index copies) {
  Index total = 1;
  for (Index l = 0; l < copies; ++l) {
    total *= site_dim;
    if (total > kDimCap) throw DimCap("copy space exceeds the d^N <= 1024 cap");
  }
  return total;
}

double offdiag_mass(const std::vector<Matrix>& mats) {
  double off = 0.0;
  for (const Matrix& m : mats) {
    off += m.squaredNorm() - m.diagonal().squaredNorm();
  }
  return off;
}

}  // namespace

CompositeChargeSet composite_average(const std::vector<HermitianOperator>& base, Index copies) {
  if (base.empty()) throw ValidationError("composite_average: needs at least one charge");
  if (copies < 1) throw ValidationError("composite_average: copies must be >= 1");
  const Index d = base.front().dim();
  for (const auto& q : base)
    if (q.dim() != d) throw ShapeError("composite_average: base charges must share one dim");
  Index total = checked_copy_dim(d, copies);

  CompositeChargeSet out;
  out.base = base;
  out.copies = copies;
  out.site_dim = d;
  std::vector<Index> dims(copies, d);
  for (const auto& q : base) {
    Matrix sum = Matrix::Zero(total, total);
    for (Index l = 0; l < copies; ++l) sum += embed_at(q.matrix(), static_cast<size_t>(l), dims);
    out.composite.emplace_back(sum / static_cast<double>(copies), q.unit());
  }
  return out;
}

std::vector<CommutatorDecayRow> commutator_decay(const std::vector<HermitianOperator>& base,
                                                 const std::vector<Index>& n_range) {
  std::vector<CommutatorDecayRow> rows;
  for (Index n : n_range) {
    CompositeChargeSet set = composite_average(base, n);
    for (size_t i = 0; i < set.composite.size(); ++i)
      for (size_t j = i + 1; j < set.composite.size(); ++j)
        rows.push_back({n, i, j, commutator(set.composite[i], set.composite[j]).operator_norm()});
  }
  return rows;
}

Matrix CommutingApproximants::reconstructed(size_t j) const {
  return basis.matrix() *
         Matrix(diagonals.at(j).cast<std::complex<double>>().asDiagonal()) *
         basis.matrix().adjoint();
}

namespace {

// One Jacobi descent from the given starting basis. Cardoso-Souloumiac
// rotations: for each pair (p,q) the optimal Givens rotation comes from the
// principal eigenvector of a 3x3 Gram matrix built from all matrices at once.
CommutingApproximants jacobi_descent(const std::vector<Matrix>& mats, const Matrix& v0,
                                     double sweeps_tol) {
  const Index d = mats.front().rows();
  std::vector<Matrix> a;
  for (const Matrix& m : mats) a.push_back(v0.adjoint() * m * v0);
  Matrix v = v0;

  std::vector<double> sweep_off{offdiag_mass(a)};
  const int max_sweeps = 200;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Index p = 0; p < d - 1; ++p) {
      for (Index q = p + 1; q < d; ++q) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (const Matrix& m : a) {
          Eigen::Vector3d h(m(p, p).real() - m(q, q).real(), 2.0 * m(p, q).real(),
                            2.0 * m(p, q).imag());
          g += h * h.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3d w = es.eigenvectors().col(2);  // principal
        if (w(0) < 0) w = -w;
        double c = std::sqrt((w(0) + 1.0) / 2.0);
        std::complex<double> s(-w(1) / (2.0 * c), w(2) / (2.0 * c));
        if (std::abs(s) < 1e-16) continue;

        // A <- R^dag A R with R acting on the (p,q) plane as [[c, conj(s)], [-s, c]].
        for (Matrix& m : a) {
          Eigen::VectorXcd col_p = m.col(p), col_q = m.col(q);
          m.col(p) = c * col_p - s * col_q;
          m.col(q) = std::conj(s) * col_p + c * col_q;
          Eigen::RowVectorXcd row_p = m.row(p), row_q = m.row(q);
          m.row(p) = c * row_p - std::conj(s) * row_q;
          m.row(q) = s * row_p + c * row_q;
        }
        Eigen::VectorXcd vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp - s * vq;
        v.col(q) = std::conj(s) * vp + c * vq;
      }
    }
    double off = offdiag_mass(a);
    double improvement = sweep_off.back() - off;
    sweep_off.push_back(off);
    if (improvement < sweeps_tol) break;
  }

  CommutingApproximants out{UnitaryOperator(v), {}, 0.0, {}, std::move(sweep_off)};
  double resid_sq = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    out.diagonals.push_back(a[j].diagonal().real());
    Matrix off = a[j];
    off.diagonal().setZero();
    resid_sq += off.squaredNorm();
    out.deviation.push_back(operator_norm(off));
  }
  out.residual = std::sqrt(resid_sq);
  return out;
}

}  // namespace

CommutingApproximants joint_diagonalize_matrices(const std::vector<Matrix>& mats,
                                                 double sweeps_tol) {
  if (mats.empty()) throw ValidationError("joint_diagonalize: needs at least one matrix");
  const Index d = mats.front().rows();
  for (const Matrix& m : mats)
    if (m.rows() != d || m.cols() != d)
      throw ShapeError("joint_diagonalize: matrices must share one square dimension");

  // The off-diagonal objective has flat valleys and local minima when charges
  // fail to commute; a handful of seeded restarts picks the best basin.
  // Ties on the objective break toward the smallest worst-charge deviation.
  constexpr int kStarts = 8;
  CommutingApproximants best = jacobi_descent(mats, Matrix::Identity(d, d), sweeps_tol);
  for (int s = 1; s < kStarts; ++s) {
    SeededRng rng(SeededRng::derive_seed(0x6a636f6269ULL, static_cast<std::uint64_t>(s)));
    CommutingApproximants cand =
        jacobi_descent(mats, random_unitary(d, rng).matrix(), sweeps_tol);
    double best_off = best.sweep_off.back();
    double cand_off = cand.sweep_off.back();
    double best_dev = *std::max_element(best.deviation.begin(), best.deviation.end());
    double cand_dev = *std::max_element(cand.deviation.begin(), cand.deviation.end());
    if (cand_off < best_off - 1e-12 ||
        (std::abs(cand_off - best_off) <= 1e-12 && cand_dev < best_dev - 1e-12))
      best = std::move(cand);
  }
  return best;
}

CommutingApproximants joint_diagonalize(const CompositeChargeSet& composite, double sweeps_tol) {
  std::vector<Matrix> mats;
  for (const auto& q : composite.composite) mats.push_back(q.matrix());
  return joint_diagonalize_matrices(mats, sweeps_tol);
}

SubspaceProjector build_ams(const CommutingApproximants& approx, const std::vector<double>& v,
                            double delta, double eta) {
  if (delta <= 0) throw ValidationError("build_ams: delta must be positive");
  if (v.size() != approx.diagonals.size())
    throw ShapeError("build_ams: one window center per charge required");
  const Index d = approx.basis.dim();

  std::vector<Index> selected;
  for (Index idx = 0; idx < d; ++idx) {
    bool inside = true;
    for (size_t j = 0; j < v.size(); ++j) {
      if (std::abs(approx.diagonals[j](idx) - v[j]) > delta) {
        inside = false;
        break;
      }
    }
    if (inside) selected.push_back(idx);
  }
  if (selected.empty())
    throw EmptyWindow("build_ams: no joint eigenvector falls inside the window");

  Matrix basis(d, static_cast<Index>(selected.size()));
  for (size_t c = 0; c < selected.size(); ++c) basis.col(c) = approx.basis.matrix().col(selected[c]);

  SubspaceProjector p;
  p.projector = basis * basis.adjoint();
  p.dim_subspace = static_cast<Index>(selected.size());
  p.window_center = v;
  p.window_halfwidth = delta;
  p.sharpness_tolerance = eta;
  p.basis = std::move(basis);
  return p;
}

AmsVerification verify_ams(const SubspaceProjector& p, const CompositeChargeSet& composite,
                           int trials, std::uint64_t seed) {
  if (p.projector.rows() != composite.dim()) throw ShapeError("verify_ams: dimension mismatch");
  if (trials < 1) throw ValidationError("verify_ams: trials must be >= 1");

  AmsVerification out;
  out.widened_halfwidth = 2.0 * p.window_halfwidth;

  // Spectral data of every composite charge for outcome statistics.
  std::vector<HermEigen> spectra;
  for (const auto& q : composite.composite) spectra.push_back(herm_eigen(q.matrix()));

  // Property (i): Haar states inside M give sharp statistics.
  double mass_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(SeededRng::derive_seed(seed, static_cast<std::uint64_t>(t)));
    Vector psi = haar_state_in_span(p.basis, rng);
    double worst_for_state = 0.0;
    for (size_t j = 0; j < spectra.size(); ++j) {
      Vector amps = spectra[j].vectors.adjoint() * psi;
      double outside = 0.0;
      for (Index k = 0; k < amps.size(); ++k) {
        if (std::abs(spectra[j].values(k) - p.window_center[j]) > out.widened_halfwidth)
          outside += std::norm(amps(k));
      }
      worst_for_state = std::max(worst_for_state, outside);
    }
    mass_sum += worst_for_state;
    out.worst_outside_mass = std::max(out.worst_outside_mass, worst_for_state);
  }
  out.mean_outside_mass = mass_sum / trials;
  out.sharp_statistics_ok = out.worst_outside_mass <= p.sharpness_tolerance;

  // Property (ii): product states with sharp statistics near v overlap M.
  // Engineered as tau(beta*)^(x)N with single-site expectations solved to hit
  // a jittered window center.
  double overlap_sum = 0.0;
  out.worst_overlap = 1.0;
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(SeededRng::derive_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(t)));
    std::vector<double> targets(p.window_center);
    for (double& v_j : targets) v_j += rng.uniform(-0.25, 0.25) * p.window_halfwidth;
    Matrix site;
    try {
      auto [betas, diag] = solve_beta(composite.base, targets);
      site = build_gge(ChargeSystem(composite.base, betas)).state.matrix();
    } catch (const Infeasible&) {
      // Jittered target fell outside the achievable set; use the window center.
      auto [betas, diag] = solve_beta(composite.base, p.window_center);
      site = build_gge(ChargeSystem(composite.base, betas)).state.matrix();
    }
    Matrix product = kron_power(site, composite.copies);
    double overlap = (p.projector * product).trace().real();
    overlap_sum += overlap;
    out.worst_overlap = std::min(out.worst_overlap, overlap);
  }
  out.mean_overlap = overlap_sum / trials;
  return out;
}

std::vector<ReducedScanRow> reduced_state_scan(const std::vector<HermitianOperator>& base,
                                               const std::vector<double>& v,
                                               const std::vector<Index>& n_range, double delta,
                                               double eta) {
  std::vector<ReducedScanRow> rows;
  for (Index n : n_range) {
    CompositeChargeSet set = composite_average(base, n);
    CommutingApproximants approx = joint_diagonalize(set);
    SubspaceProjector p = build_ams(approx, v, delta, eta);

    Matrix omega = p.projector / static_cast<double>(p.dim_subspace);
    std::vector<Index> dims = set.site_dims();

    std::vector<Matrix> reduced;
    Matrix mean_site = Matrix::Zero(set.site_dim, set.site_dim);
    for (Index l = 0; l < n; ++l) {
      reduced.push_back(partial_trace_matrix(omega, dims, {l}));
      mean_site += reduced.back();
    }
    mean_site /= static_cast<double>(n);

    std::vector<double> targets;
    for (const auto& q : base) targets.push_back(expectation(q.matrix(), mean_site));
    auto [betas, diag] = solve_beta(base, targets);
    DensityMatrix tau = build_gge(ChargeSystem(base, betas)).state;

    double avg = 0.0;
    for (const Matrix& r : reduced) avg += relative_entropy(r, tau.matrix());
    avg /= static_cast<double>(n);

    rows.push_back({n, p.dim_subspace, avg, betas});
  }
  return rows;
}

DensityMatrix exact_microcanonical_reduction(const std::vector<HermitianOperator>& charges,
                                             const std::vector<double>& values,
                                             const std::vector<Index>& system_dims) {
  if (charges.empty()) throw ValidationError("exact_microcanonical_reduction: no charges");
  if (values.size() != charges.size())
    throw ShapeError("exact_microcanonical_reduction: one value per charge required");
  for (size_t i = 0; i < charges.size(); ++i)
    for (size_t j = i + 1; j < charges.size(); ++j)
      if (commutator(charges[i], charges[j]).operator_norm() >= 1e-10)
        throw NonCommuting("exact_microcanonical_reduction: charges do not commute");

  std::vector<Matrix> mats;
  for (const auto& q : charges) mats.push_back(q.matrix());
  CommutingApproximants approx = joint_diagonalize_matrices(mats, 1e-16);

  const Index d = approx.basis.dim();
  // Eigenvalue equality up to a numerical tolerance.
  constexpr double kValueTol = 1e-6;
  std::vector<Index> selected;
  for (Index idx = 0; idx < d; ++idx) {
    bool match = true;
    for (size_t j = 0; j < values.size(); ++j) {
      if (std::abs(approx.diagonals[j](idx) - values[j]) > kValueTol) {
        match = false;
        break;
      }
    }
    if (match) selected.push_back(idx);
  }
  if (selected.empty())
    throw EmptyWindow("exact_microcanonical_reduction: empty joint eigenspace");

  Matrix basis(d, static_cast<Index>(selected.size()));
  for (size_t c = 0; c < selected.size(); ++c) basis.col(c) = approx.basis.matrix().col(selected[c]);
  Matrix omega = basis * basis.adjoint() / static_cast<double>(selected.size());

  Index prod = 1;
  for (Index f : system_dims) prod *= f;
  if (prod != d) throw ShapeError("exact_microcanonical_reduction: system_dims mismatch");
  return DensityMatrix(partial_trace_matrix(omega, system_dims, {0}));
}

}  // namespace qtmc
