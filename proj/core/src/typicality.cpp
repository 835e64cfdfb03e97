#include "qtmc/typicality.hpp"

#include <cmath>

#include "qtmc/random.hpp"

namespace qtmc {

namespace {

Index product_dim(const std::vector<Index>& dims) {
  Index total = 1;
  for (Index d : dims) total *= d;
  return total;
}

std::vector<Matrix> reduced_sites(const Matrix& m, const std::vector<Index>& dims) {
  std::vector<Matrix> out;
  for (size_t l = 0; l < dims.size(); ++l)
    out.push_back(partial_trace_matrix(m, dims, {static_cast<Index>(l)}));
  return out;
}

}  // namespace

TypicalityReport sample_typicality(const SubspaceProjector& p, const std::vector<Index>& site_dims,
                                   int trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("sample_typicality: trials must be >= 1");
  if (product_dim(site_dims) != p.projector.rows())
    throw ShapeError("sample_typicality: site dims do not match the projector");

  Matrix omega = p.projector / static_cast<double>(p.dim_subspace);
  std::vector<Matrix> omega_sites = reduced_sites(omega, site_dims);

  Index max_site = 0;
  for (Index d : site_dims) max_site = std::max(max_site, d);

  TypicalityReport report;
  report.trials = trials;
  report.bound = static_cast<double>(max_site) / std::sqrt(static_cast<double>(p.dim_subspace));
  report.per_site.assign(site_dims.size(), 0.0);

  std::vector<double> trial_means;
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(SeededRng::derive_seed(seed, static_cast<std::uint64_t>(t)));
    Vector psi = haar_state_in_span(p.basis, rng);
    Matrix rho = psi * psi.adjoint();
    double site_sum = 0.0;
    for (size_t l = 0; l < site_dims.size(); ++l) {
      double dev = trace_distance(
          partial_trace_matrix(rho, site_dims, {static_cast<Index>(l)}), omega_sites[l]);
      report.per_site[l] += dev;
      report.max_deviation = std::max(report.max_deviation, dev);
      site_sum += dev;
    }
    double mean_over_sites = site_sum / static_cast<double>(site_dims.size());
    trial_means.push_back(mean_over_sites);
    total += site_sum;
  }
  for (double& v : report.per_site) v /= trials;
  report.mean_deviation = total / (trials * static_cast<double>(site_dims.size()));

  double var = 0.0;
  for (double m : trial_means) var += (m - report.mean_deviation) * (m - report.mean_deviation);
  var /= std::max(1, trials - 1);
  report.standard_error = std::sqrt(var / trials);
  report.bound_satisfied = report.mean_deviation <= report.bound + 3.0 * report.standard_error;
  return report;
}

TimeAverageReport time_average_deviation(const SubspaceProjector& p, const HermitianOperator& h,
                                         const std::vector<HermitianOperator>& charges,
                                         const Vector& psi0, const std::vector<double>& times,
                                         const std::vector<Index>& site_dims) {
  if (product_dim(site_dims) != p.projector.rows() || h.dim() != p.projector.rows())
    throw ShapeError("time_average_deviation: dimension mismatch");
  for (const auto& q : charges) {
    if (q.dim() != h.dim()) throw ShapeError("time_average_deviation: charge dim mismatch");
    if (operator_norm(commutator_matrix(h.matrix(), q.matrix())) >= 1e-10)
      throw NonCommutingHamiltonian(
          "time_average_deviation: Hamiltonian does not commute with a charge");
  }
  if (psi0.size() != p.projector.rows())
    throw ShapeError("time_average_deviation: psi0 dimension mismatch");
  if ((psi0 - p.projector * psi0).norm() >= 1e-10)
    throw NotInSubspace("time_average_deviation: psi0 leaks outside range(P)");
  if (times.empty()) throw ValidationError("time_average_deviation: needs at least one time");

  Matrix omega = p.projector / static_cast<double>(p.dim_subspace);
  std::vector<Matrix> omega_sites = reduced_sites(omega, site_dims);

  HermEigen eh = herm_eigen(h.matrix());
  Vector coeffs = eh.vectors.adjoint() * psi0;

  Index max_site = 0;
  for (Index d : site_dims) max_site = std::max(max_site, d);

  TimeAverageReport report;
  report.times = times;
  report.bound = static_cast<double>(max_site) / std::sqrt(static_cast<double>(p.dim_subspace));

  double acc = 0.0;
  for (size_t ti = 0; ti < times.size(); ++ti) {
    Vector phased(coeffs.size());
    for (Index k = 0; k < coeffs.size(); ++k)
      phased(k) = coeffs(k) * std::exp(std::complex<double>(0, -eh.values(k) * times[ti]));
    Vector psi = eh.vectors * phased;

    if (std::abs(psi.norm() - 1.0) > 1e-10)
      throw ValidationError("time_average_deviation: evolution lost normalization");
    if ((psi - p.projector * psi).norm() >= 1e-9)
      throw NotInSubspace("time_average_deviation: evolution left the subspace");

    Matrix rho = psi * psi.adjoint();
    double site_sum = 0.0;
    for (size_t l = 0; l < site_dims.size(); ++l)
      site_sum += trace_distance(
          partial_trace_matrix(rho, site_dims, {static_cast<Index>(l)}), omega_sites[l]);
    double mean_sites = site_sum / static_cast<double>(site_dims.size());
    report.instantaneous.push_back(mean_sites);
    acc += mean_sites;
    report.running_average.push_back(acc / static_cast<double>(ti + 1));
  }
  report.final_average = report.running_average.back();
  // Sampling slack: three standard errors of the (correlated) time series.
  double var = 0.0;
  for (double x : report.instantaneous)
    var += (x - report.final_average) * (x - report.final_average);
  var /= std::max<size_t>(1, times.size() - 1);
  double se = std::sqrt(var / static_cast<double>(times.size()));
  report.bound_satisfied = report.final_average <= report.bound + 3.0 * se + 1e-12;
  return report;
}

}  // namespace qtmc
