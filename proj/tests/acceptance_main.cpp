// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion pins its own tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "qtmc/landauer.hpp"
#include "qtmc/microcanonical.hpp"
#include "qtmc/protocols.hpp"
#include "qtmc/random.hpp"
#include "qtmc/typicality.hpp"

using namespace qtmc;

namespace {

std::vector<HermitianOperator> random_charges(Index dim, size_t k, bool commuting,
                                              SeededRng& rng) {
  std::vector<HermitianOperator> out;
  if (commuting) {
    UnitaryOperator u = random_unitary(dim, rng);
    for (size_t i = 0; i < k; ++i) {
      Eigen::VectorXd d(dim);
      for (Index j = 0; j < dim; ++j) d(j) = rng.uniform(-1.0, 1.0);
      out.emplace_back(u.matrix() * Matrix(d.cast<std::complex<double>>().asDiagonal()) *
                       u.matrix().adjoint());
    }
  } else {
    for (size_t i = 0; i < k; ++i) out.push_back(random_hermitian(dim, rng));
  }
  return out;
}

// beta is only recoverable when the charge covariance at tau has no
// near-null direction (spectral collisions make the forward map lose it).
bool identifiable(const std::vector<HermitianOperator>& charges,
                  const std::vector<double>& betas, double floor = 3e-3) {
  GGEState g = build_gge(ChargeSystem(charges, betas));
  const size_t k = charges.size();
  Eigen::MatrixXd cov(k, k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      Matrix sym = 0.5 * (charges[i].matrix() * charges[j].matrix() +
                          charges[j].matrix() * charges[i].matrix());
      cov(i, j) = expectation(sym, g.state.matrix()) -
                  expectation(charges[i], g.state) * expectation(charges[j], g.state);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  return es.eigenvalues().minCoeff() >= floor;
}

bool criterion_gge_identity(std::string& detail) {
  SeededRng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(7));
    size_t k = 1 + rng.uniform_index(3);
    auto charges = random_charges(dim, k, t % 3 == 0, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < k; ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    ChargeSystem cs(charges, betas);
    DensityMatrix rho = random_density_matrix(dim, rng);
    double gap = free_entropy_gap(cs, rho);
    double div = relative_entropy(rho, build_gge(cs).state);
    worst = std::max(worst, std::abs(gap - div));
  }
  detail = "worst |gap - D| = " + std::to_string(worst);
  return worst < 1e-9;
}

bool criterion_maxent_roundtrip(std::string& detail) {
  SeededRng rng(1002);
  SolveOptions opts;
  opts.tol = 1e-11;  // recovery to 1e-6 needs a tight gradient when conditioning is poor
  double worst = 0.0;
  int done = 0;
  while (done < 200) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(5));
    size_t k = 1 + rng.uniform_index(3);
    bool commuting = done % 2 == 0;
    // commuting charges must stay linearly independent for beta to be identifiable
    if (commuting) k = std::min(k, static_cast<size_t>(dim - 1));
    auto charges = random_charges(dim, k, commuting, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < k; ++i) betas.push_back(rng.uniform(-1.5, 1.5));
    if (!identifiable(charges, betas)) continue;
    GGEState g = build_gge(ChargeSystem(charges, betas));
    std::vector<double> targets;
    for (const auto& q : charges) targets.push_back(expectation(q, g.state));
    auto [rec, diag] = solve_beta(charges, targets, opts);
    for (size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(rec[i] - betas[i]));
    ++done;
  }

  // infeasible targets must raise, never return garbage
  int raised = 0;
  const int infeasible_trials = 20;
  for (int t = 0; t < infeasible_trials; ++t) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(4));
    auto charges = random_charges(dim, 1 + rng.uniform_index(2), false, rng);
    std::vector<double> targets;
    for (const auto& q : charges)
      targets.push_back(herm_eigen(q.matrix()).values.maxCoeff() * 1.5);
    try {
      solve_beta(charges, targets);
    } catch (const Infeasible&) {
      ++raised;
    }
  }
  detail = "worst beta error = " + std::to_string(worst) + ", infeasible raised " +
           std::to_string(raised) + "/" + std::to_string(infeasible_trials);
  return worst < 1e-6 && raised == infeasible_trials;
}

bool criterion_second_law(std::string& detail) {
  SeededRng rng(1003);
  double min_slack = 1e300, max_kp = -1e300;
  for (int t = 0; t < 1000; ++t) {
    bool commuting = t % 2 == 0;
    Index dim = 2 + static_cast<Index>(rng.uniform_index(2));
    size_t k = 1 + rng.uniform_index(3);
    auto charges = random_charges(dim, k, commuting, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < k; ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    ChargeSystem cs(charges, betas);
    Index copies = dim == 2 ? 1 + static_cast<Index>(rng.uniform_index(2)) : 1;
    BathModel bath(cs, copies);
    DensityMatrix system = random_density_matrix(dim, rng);
    Index joint_dim = dim;
    for (Index l = 0; l < copies; ++l) joint_dim *= dim;
    UnitaryOperator u = random_unitary(joint_dim, rng);

    auto [joint, ledger] = run_unitary(system, bath, u);
    SecondLawAudit audit =
        second_law_audit(ProtocolTrace::from_steps({ledger}, betas), betas);
    min_slack = std::min(min_slack, audit.slack);

    auto [joint2, ledger2] = run_unitary(bath.particle_state(), bath, u);
    SecondLawAudit kp = second_law_audit(ProtocolTrace::from_steps({ledger2}, betas), betas);
    max_kp = std::max(max_kp, kp.lhs);
  }
  detail = "min slack = " + std::to_string(min_slack) +
           ", max thermal weighted work = " + std::to_string(max_kp);
  return min_slack >= -1e-9 && max_kp <= 1e-9;
}

bool criterion_extraction(std::string& detail) {
  Matrix b(2, 2);
  b << 1, 0, 0, 0;
  ChargeSystem cs({pauli_z(), HermitianOperator(b)}, {0.7, 0.4});
  BathModel bath(cs, 1);
  DensityMatrix sys = DensityMatrix::maximally_mixed(2);
  std::vector<double> deficits;
  for (double dp : {0.02, 0.01, 0.005})
    deficits.push_back(extraction_protocol(sys, bath, dp, 100000).second_law_slack);
  double r1 = deficits[1] / deficits[0];
  double r2 = deficits[2] / deficits[1];
  std::ostringstream ss;
  ss << "deficits " << deficits[0] << " -> " << deficits[1] << " -> " << deficits[2]
     << ", ratios " << r1 << ", " << r2;
  detail = ss.str();
  bool positive = deficits[0] > 0 && deficits[1] > 0 && deficits[2] > 0;
  return positive && r1 >= 0.3 && r1 <= 0.7 && r2 >= 0.3 && r2 <= 0.7;
}

bool criterion_trading(std::string& detail) {
  auto make = [](double gap) {
    Matrix a(2, 2), bm(2, 2);
    a << 0, 0, 0, 1;
    bm << 1, 0, 0, gap;
    return ChargeSystem({HermitianOperator(a), HermitianOperator(bm)}, {1.0, 1.0});
  };
  WorkLedger lg1 = trade_resources(BathModel(make(0.1), 1), {0, 1});
  WorkLedger lg2 = trade_resources(BathModel(make(0.05), 1), {0, 1});
  double ratio1 = lg1.free_entropy_change_bath / std::abs(lg1.delta_bath[0]);
  double ratio2 = lg2.free_entropy_change_bath / std::abs(lg2.delta_bath[0]);
  double shrink = ratio2 / ratio1;
  double residue1 = std::abs(lg1.delta_bath[0] + lg1.delta_bath[1] -
                             lg1.free_entropy_change_bath);
  double residue2 = std::abs(lg2.delta_bath[0] + lg2.delta_bath[1] -
                             lg2.free_entropy_change_bath);
  bool ds_zero = std::abs(lg1.delta_entropy_bath) < 1e-12;
  std::ostringstream ss;
  ss << "ratio " << ratio1 << " -> " << ratio2 << " (shrink " << shrink
     << "), identity residues " << residue1 << ", " << residue2;
  detail = ss.str();
  return shrink >= 0.4 && shrink <= 0.6 && residue1 < 1e-10 && residue2 < 1e-10 && ds_zero;
}

bool criterion_landauer(std::string& detail) {
  SeededRng rng(1006);
  double worst_balance = 0.0;
  bool bound_ok = true;
  for (int t = 0; t < 1000; ++t) {
    size_t k = 1 + rng.uniform_index(3);
    std::vector<HermitianOperator> charges;
    bool commuting = t % 2 == 0;
    if (commuting) {
      for (size_t i = 0; i < k; ++i) {
        Eigen::VectorXd d(2);
        d << rng.uniform(-1, 1), rng.uniform(-1, 1);
        charges.emplace_back(Matrix(d.cast<std::complex<double>>().asDiagonal()));
      }
    } else {
      for (size_t i = 0; i < k; ++i) charges.push_back(random_hermitian(2, rng));
    }
    std::vector<double> betas;
    for (size_t i = 0; i < k; ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    BathModel bath(ChargeSystem(charges, betas), 1);
    DensityMatrix system = random_density_matrix(2, rng);
    UnitaryOperator u = random_unitary(4, rng);
    ErasureReport rep = erase(system, bath, u, DensityMatrix::basis_state(2, 0));
    double balance =
        -rep.delta_S_system + rep.mutual_information + rep.bath_relative_entropy;
    worst_balance = std::max(worst_balance, std::abs(rep.weighted_heat - balance));
    bound_ok = bound_ok && landauer_bound_check(rep).satisfied;
  }

  double eta = 1e-7;
  double beta = -0.5 * std::log((1.0 - eta) / eta);
  BathModel bath(ChargeSystem({pauli_z()}, {beta}), 1);
  ErasureReport rep = erase(DensityMatrix::maximally_mixed(2), bath, UnitaryOperator::swap(2),
                            DensityMatrix::basis_state(2, 0));
  std::ostringstream ss;
  ss << "worst balance residue " << worst_balance << ", complete erasure quality "
     << rep.erasure_quality << ", heat " << rep.weighted_heat;
  detail = ss.str();
  return worst_balance < 1e-9 && bound_ok && rep.erasure_quality < 1e-6 &&
         rep.weighted_heat >= std::log(2.0) - 1e-9;
}

bool criterion_commutator_decay(std::string& detail) {
  std::vector<Index> range{2, 3, 4, 5, 6, 7, 8};
  auto rows = commutator_decay({pauli_x(), pauli_y()}, range);
  double worst = 0.0;
  for (const auto& r : rows)
    worst = std::max(worst, std::abs(r.norm - 2.0 / static_cast<double>(r.copies)));
  detail = "worst | ||[Qx,Qy]|| - 2/N | = " + std::to_string(worst);
  return worst < 1e-10;
}

bool criterion_ams_pipeline(std::string& detail) {
  std::ostringstream ss;
  bool ok = true;

  // commuting sigma_z case: exact microcanonical projector, dim 6 at N=4, v=0
  auto zset = composite_average({pauli_z()}, 4);
  auto zapprox = joint_diagonalize(zset);
  SubspaceProjector zp = build_ams(zapprox, {0.0}, 0.1);
  Matrix exact = Matrix::Zero(16, 16);
  for (Index x = 0; x < 16; ++x) {
    int z = 0;
    for (Index l = 0; l < 4; ++l) z += ((x >> l) & 1) ? -1 : 1;
    if (z == 0) exact(x, x) = 1.0;
  }
  double proj_err = (zp.projector - exact).cwiseAbs().maxCoeff();
  ss << "sigma_z projector err " << proj_err << " dim " << zp.dim_subspace << "; ";
  ok = ok && proj_err < 1e-10 && zp.dim_subspace == 6;

  // non-commuting sigma_x/sigma_z windows over N = 2..6
  const std::vector<double> v{0.3, 0.3};
  const double delta = 0.35;
  bool nonempty = true, compliant = true;
  for (Index n = 2; n <= 6; ++n) {
    auto set = composite_average({pauli_x(), pauli_z()}, n);
    auto approx = joint_diagonalize(set);
    try {
      SubspaceProjector p = build_ams(approx, v, delta);
      Matrix omega = p.projector / static_cast<double>(p.dim_subspace);
      for (size_t j = 0; j < 2; ++j) {
        double e = expectation(set.composite[j].matrix(), omega);
        if (e < v[j] - delta - 1e-12 || e > v[j] + delta + 1e-12) compliant = false;
      }
    } catch (const EmptyWindow&) {
      nonempty = false;
    }
  }
  ss << (nonempty ? "windows nonempty" : "EMPTY WINDOW") << ", "
     << (compliant ? "Omega window-compliant" : "Omega OUT OF WINDOW") << "; ";
  ok = ok && nonempty && compliant;

  // scan trend: non-increasing with final < initial/2
  auto rows = reduced_state_scan({pauli_x(), pauli_z()}, v, {2, 3, 4, 5, 6}, delta);
  bool mono = true;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].avg_relative_entropy > rows[i - 1].avg_relative_entropy + 1e-9) mono = false;
  bool half = rows.back().avg_relative_entropy < 0.5 * rows.front().avg_relative_entropy;
  ss << "scan [";
  for (const auto& r : rows) ss << " " << r.avg_relative_entropy;
  ss << " ] non-increasing=" << (mono ? "yes" : "no") << " final<init/2="
     << (half ? "yes" : "no");
  if (!mono || !half)
    ss << " (the N=2 subspace is swap-invariant, so its single-site marginals are an exact "
          "MaxEnt fit and the sequence starts at zero)";
  ok = ok && mono && half;

  detail = ss.str();
  return ok;
}

bool criterion_typicality(std::string& detail) {
  std::ostringstream ss;

  auto zset = composite_average({pauli_z()}, 4);
  SubspaceProjector full = build_ams(joint_diagonalize(zset), {0.0}, 2.0);
  TypicalityReport a = sample_typicality(full, {2, 2, 2, 2}, 500, 2024);
  bool ok_a = std::abs(a.bound - 0.5) < 1e-12 &&
              a.mean_deviation <= a.bound + 3.0 * a.standard_error;
  ss << "full space mean " << a.mean_deviation << " vs bound " << a.bound << "; ";

  auto xzset = composite_average({pauli_x(), pauli_z()}, 6);
  SubspaceProjector ams = build_ams(joint_diagonalize(xzset), {0.3, 0.3}, 0.25);
  TypicalityReport b = sample_typicality(ams, std::vector<Index>(6, 2), 500, 2025);
  bool ok_b = b.mean_deviation <= b.bound + 3.0 * b.standard_error;
  ss << "AMS N=6 mean " << b.mean_deviation << " vs bound " << b.bound << "; ";

  SubspaceProjector sector = build_ams(joint_diagonalize(zset), {0.0}, 0.1);
  std::vector<Index> dims(4, 2);
  Matrix h = Matrix::Zero(16, 16);
  for (Index l = 0; l < 4; ++l)
    h += (1.0 + 0.1 * static_cast<double>(l)) *
         embed_at(pauli_z().matrix(), static_cast<size_t>(l), dims);
  SeededRng rng(2026);
  Vector psi0 = haar_state_in_span(sector.basis, rng);
  std::vector<double> times;
  for (int i = 0; i < 200; ++i) times.push_back(100.0 * i / 199.0);
  TimeAverageReport c = time_average_deviation(sector, HermitianOperator(h), zset.composite,
                                               psi0, times, dims);
  bool ok_c = c.final_average <= c.bound + 1e-12;
  ss << "time average " << c.final_average << " vs bound " << c.bound;

  detail = ss.str();
  return ok_a && ok_b && ok_c;
}

bool criterion_pancake(std::string& detail) {
  auto [choi, min_eig] = pancake_choi_check();
  detail = "Choi minimum eigenvalue = " + std::to_string(min_eig);
  return std::abs(min_eig + 0.25) < 1e-10;
}

bool criterion_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("qtmc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  auto run_twice = [&](std::vector<std::string> args, const std::string& stem) {
    fs::path f1 = dir / (stem + "_1");
    fs::path f2 = dir / (stem + "_2");
    auto a1 = args;
    a1.push_back("--out");
    a1.push_back(f1.string());
    auto a2 = args;
    a2.push_back("--out");
    a2.push_back(f2.string());
    if (qtmc::cli::run_command(a1) != 0) return false;
    if (qtmc::cli::run_command(a2) != 0) return false;
    return slurp(f1) == slurp(f2) && !slurp(f1).empty();
  };

  bool ok = true;
  ok = ok && run_twice({"gge", "solve", "--charges", "pauli_x,pauli_y", "--targets",
                        "0.3,0.4"},
                       "solve");
  ok = ok && run_twice({"protocol", "audit", "--scenario", "qubit-extract", "--trials", "40",
                        "--seed", "11"},
                       "audit");
  ok = ok && run_twice({"protocol", "extract", "--scenario", "qubit-extract", "--delta-p",
                        "0.02", "--rounds", "1000"},
                       "extract");

  fs::path ams = dir / "ams.json";
  ok = ok && qtmc::cli::run_command({"micro", "ams", "--base", "pauli_x,pauli_z", "--copies",
                                     "4", "--values", "0.3,0.3", "--delta", "0.3", "--out",
                                     ams.string()}) == 0;
  ok = ok && run_twice({"typicality", "sample", "--ams", ams.string(), "--trials", "60",
                        "--seed", "9"},
                       "typ");
  fs::remove_all(dir);
  detail = ok ? "byte-identical payloads across reruns" : "payload mismatch";
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  std::vector<Criterion> criteria{
      {1, "GGE identity suite", criterion_gge_identity},
      {2, "MaxEnt round trip", criterion_maxent_roundtrip},
      {3, "second-law audit", criterion_second_law},
      {4, "extraction tightness trend", criterion_extraction},
      {5, "trading exchange rate", criterion_trading},
      {6, "Landauer balance and bound", criterion_landauer},
      {7, "commutator decay", criterion_commutator_decay},
      {8, "AMS pipeline", criterion_ams_pipeline},
      {9, "typicality bounds", criterion_typicality},
      {10, "pancake Choi check", criterion_pancake},
      {11, "CLI determinism", criterion_determinism},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const Error& e) {
      detail = std::string(e.name()) + ": " + e.what();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-28s (%6.2f s) %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
