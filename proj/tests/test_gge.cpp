#include <doctest.h>

#include <cmath>

#include "qtmc/gge.hpp"
#include "qtmc/random.hpp"

using namespace qtmc;

namespace {

// Random charge set of k charges at the given dim; commuting sets are all
// diagonal in a shared random basis.
std::vector<HermitianOperator> random_charges(Index dim, size_t k, bool commuting,
                                              SeededRng& rng) {
  std::vector<HermitianOperator> out;
  if (commuting) {
    UnitaryOperator u = random_unitary(dim, rng);
    for (size_t i = 0; i < k; ++i) {
      Eigen::VectorXd d(dim);
      for (Index j = 0; j < dim; ++j) d(j) = rng.uniform(-1.0, 1.0);
      Matrix m = u.matrix() * Matrix(d.cast<std::complex<double>>().asDiagonal()) *
                 u.matrix().adjoint();
      out.emplace_back(std::move(m));
    }
  } else {
    for (size_t i = 0; i < k; ++i) out.push_back(random_hermitian(dim, rng));
  }
  return out;
}

}  // namespace

TEST_CASE("build_gge closed forms") {
  GGEState flat = build_gge(ChargeSystem({pauli_z()}, {0.0}));
  CHECK((flat.state.matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-14);
  CHECK(flat.log_partition == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  GGEState g = build_gge(ChargeSystem({pauli_z()}, {std::log(2.0)}));
  // Z = 1/2 + 2 = 2.5, populations (0.2, 0.8)
  CHECK(g.state.matrix()(0, 0).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(g.state.matrix()(1, 1).real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(g.log_partition == doctest::Approx(std::log(2.5)).epsilon(1e-12));

  GGEState xy = build_gge(ChargeSystem({pauli_x(), pauli_y()}, {M_SQRT1_2, M_SQRT1_2}));
  HermEigen e = herm_eigen(xy.state.matrix());
  double z = std::exp(1.0) + std::exp(-1.0);
  CHECK(e.values(0) == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-9));
  CHECK(e.values(1) == doctest::Approx(std::exp(1.0) / z).epsilon(1e-9));
}

TEST_CASE("GGEState reproduces its defining expression") {
  SeededRng rng(41);
  for (int t = 0; t < 20; ++t) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(5));
    auto charges = random_charges(dim, 1 + rng.uniform_index(3), t % 2 == 0, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < charges.size(); ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    ChargeSystem cs(charges, betas);
    GGEState g = build_gge(cs);
    Matrix direct = herm_exp(Matrix(-cs.weighted_charge())) / std::exp(g.log_partition);
    CHECK((g.state.matrix() - direct).cwiseAbs().maxCoeff() < 1e-10);
    // tau commutes with R
    CHECK(operator_norm(commutator_matrix(g.state.matrix(), cs.weighted_charge())) < 1e-10);
  }
}

TEST_CASE("free entropy identities") {
  SeededRng rng(43);
  for (int t = 0; t < 20; ++t) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(4));
    auto charges = random_charges(dim, 1 + rng.uniform_index(2), false, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < charges.size(); ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    ChargeSystem cs(charges, betas);
    GGEState g = build_gge(cs);
    CHECK(free_entropy(cs, g.state) == doctest::Approx(-g.log_partition).epsilon(1e-9));
  }

  ChargeSystem zero_beta({pauli_z()}, {0.0});
  CHECK(free_entropy(zero_beta, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  ChargeSystem unit({pauli_z()}, {1.0});
  CHECK(free_entropy(unit, DensityMatrix::basis_state(2, 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free entropy gap equals relative entropy to tau") {
  ChargeSystem cs({pauli_z()}, {std::log(2.0)});
  GGEState g = build_gge(cs);
  CHECK(free_entropy_gap(cs, g.state) == doctest::Approx(0).epsilon(1e-10));

  // D(|0><0| || diag(0.2, 0.8)) = -ln 0.2 = ln 5
  CHECK(free_entropy_gap(cs, DensityMatrix::basis_state(2, 0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-9));

  SeededRng rng(47);
  for (int t = 0; t < 50; ++t) {
    DensityMatrix rho = random_density_matrix(2, rng);
    auto charges = random_charges(2, 2, false, rng);
    ChargeSystem sys(charges, {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
    double gap = free_entropy_gap(sys, rho);
    CHECK(gap == doctest::Approx(relative_entropy(rho, build_gge(sys).state)).epsilon(1e-9));
  }
}

TEST_CASE("free entropy gap goes to infinity when tau underflows") {
  // beta large enough that one thermal eigenvalue drops below the support
  // threshold: the relative-entropy route diverges and the gap reports it
  ChargeSystem cs({pauli_z()}, {800.0});
  CHECK(std::isinf(free_entropy_gap(cs, DensityMatrix::maximally_mixed(2))));
}

TEST_CASE("free entropy is minimized by the thermal state, any beta signs") {
  SeededRng rng(53);
  for (int t = 0; t < 200; ++t) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(3));
    auto charges = random_charges(dim, 1 + rng.uniform_index(3), t % 2 == 0, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < charges.size(); ++i) betas.push_back(rng.uniform(-2.0, 2.0));
    ChargeSystem cs(charges, betas);
    double f_tau = free_entropy(cs, build_gge(cs).state);
    DensityMatrix rho = random_density_matrix(dim, rng);
    CHECK(free_entropy(cs, rho) >= f_tau - 1e-10);
  }
}

TEST_CASE("MaxEnt optimality among states with matching expectations") {
  SeededRng rng(59);
  int done = 0;
  while (done < 1000) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(3));
    auto charges = random_charges(dim, 1 + rng.uniform_index(2), false, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < charges.size(); ++i) betas.push_back(rng.uniform(-1.5, 1.5));
    ChargeSystem cs(charges, betas);
    GGEState g = build_gge(cs);

    // Perturbation with tr D = 0 and tr(Q_i D) = 0: project onto the
    // orthogonal complement of span{I, Q_i} in the Hilbert-Schmidt inner
    // product (orthonormalize the span first), scaled to keep positivity.
    std::vector<Matrix> basis;
    std::vector<Matrix> raw{Matrix::Identity(dim, dim)};
    for (const auto& q : charges) raw.push_back(q.matrix());
    for (Matrix b : raw) {
      for (const Matrix& e : basis) b -= (e.adjoint() * b).trace() * e;
      double n = b.norm();
      if (n > 1e-12) basis.push_back(b / n);
    }
    Matrix pert = random_hermitian(dim, rng).matrix();
    for (const Matrix& e : basis) pert -= ((e.adjoint() * pert).trace() * e).eval();
    pert = 0.5 * (pert + pert.adjoint().eval());
    bool ok = std::abs(pert.trace().real()) < 1e-10;
    for (const auto& q : charges)
      if (std::abs((q.matrix() * pert).trace().real()) > 1e-10) ok = false;
    REQUIRE(ok);
    if (operator_norm(pert) < 1e-12) continue;

    double lmin = herm_eigen(g.state.matrix()).values.minCoeff();
    double scale = 0.5 * lmin / std::max(1e-300, operator_norm(pert));
    Matrix rho = g.state.matrix() + scale * pert;
    double s_rho = von_neumann_entropy(rho);
    CHECK(s_rho <= von_neumann_entropy(g.state) + 1e-9);
    ++done;
  }
}

TEST_CASE("dual function is convex along random segments") {
  SeededRng rng(61);
  auto charges = random_charges(3, 2, false, rng);
  Eigen::Vector2d v(0.2, -0.1);
  auto dual = [&](const Eigen::Vector2d& b) {
    ChargeSystem cs(charges, {b(0), b(1)});
    GGEState g = build_gge(cs);
    return g.log_partition + b.dot(v);
  };
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector2d a(rng.uniform(-2, 2), rng.uniform(-2, 2));
    Eigen::Vector2d b(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(dual(0.5 * (a + b)) <= 0.5 * (dual(a) + dual(b)) + 1e-9);
  }
}

TEST_CASE("solve_beta examples") {
  auto [beta0, diag0] = solve_beta({pauli_z()}, {0.0});
  CHECK(std::abs(beta0[0]) < 1e-8);

  ChargeSystem cs({pauli_x(), pauli_y()}, {0.3, -0.7});
  GGEState g = build_gge(cs);
  std::vector<double> targets{expectation(cs.charges[0], g.state),
                              expectation(cs.charges[1], g.state)};
  auto [betas, diag] = solve_beta(cs.charges, targets);
  CHECK(std::abs(betas[0] - 0.3) < 1e-8);
  CHECK(std::abs(betas[1] + 0.7) < 1e-8);
  CHECK(diag.gradient_norm < 1e-9);

  CHECK_THROWS_AS(solve_beta({pauli_z()}, {1.5}), Infeasible);
}

TEST_CASE("solve_beta round trips on random charge sets") {
  SeededRng rng(67);
  SolveOptions opts;
  opts.tol = 1e-11;  // beta recovery needs a tight gradient on ill-conditioned sets
  int done = 0;
  while (done < 60) {
    Index dim = 2 + static_cast<Index>(rng.uniform_index(5));
    size_t k = 1 + rng.uniform_index(3);
    bool commuting = done % 2 == 0;
    // commuting charges live in the (dim-1)-dimensional traceless diagonal
    // space; beta is only identifiable when they stay linearly independent
    if (commuting) k = std::min(k, static_cast<size_t>(dim - 1));
    auto charges = random_charges(dim, k, commuting, rng);
    std::vector<double> betas;
    for (size_t i = 0; i < k; ++i) betas.push_back(rng.uniform(-1.5, 1.5));
    GGEState g = build_gge(ChargeSystem(charges, betas));

    // skip draws whose charge covariance at tau has a near-null direction:
    // the forward map barely depends on beta along it
    Eigen::MatrixXd cov(k, k);
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) {
        Matrix sym = 0.5 * (charges[i].matrix() * charges[j].matrix() +
                            charges[j].matrix() * charges[i].matrix());
        cov(i, j) = expectation(sym, g.state.matrix()) -
                    expectation(charges[i], g.state) * expectation(charges[j], g.state);
      }
    }
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues().minCoeff() < 3e-3)
      continue;

    std::vector<double> targets;
    for (const auto& q : charges) targets.push_back(expectation(q, g.state));
    auto [rec, diag] = solve_beta(charges, targets, opts);
    for (size_t i = 0; i < k; ++i) CHECK(std::abs(rec[i] - betas[i]) < 1e-6);
    ++done;
  }
}

TEST_CASE("pancake map is trace preserving but not completely positive") {
  auto [choi, min_eig] = pancake_choi_check();
  CHECK(min_eig == doctest::Approx(-0.25).epsilon(1e-10));

  Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  CHECK((pancake_map(mixed) - mixed).norm() < 1e-14);

  SeededRng rng(71);
  for (int t = 0; t < 1000; ++t) {
    DensityMatrix rho = random_density_matrix(2, rng);
    CHECK(pancake_map(rho.matrix()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
