#pragma once

#include <cstdint>
#include <vector>

#include "qtmc/microcanonical.hpp"

namespace qtmc {

struct TypicalityReport {
  int trials = 0;
  double mean_deviation = 0.0;  // mean over trials and sites of the per-site distance
  double max_deviation = 0.0;
  double bound = 0.0;  // dim(s)/sqrt(dim(M))
  std::vector<double> per_site;
  double standard_error = 0.0;  // over per-trial site means
  bool bound_satisfied = false;  // mean <= bound + 3 SE
};

/// Haar states in range(P): per-site reduced states against the reduced
/// maximally mixed subspace state Omega = P/tr P, averaged over trials.
TypicalityReport sample_typicality(const SubspaceProjector& p, const std::vector<Index>& site_dims,
                                   int trials, std::uint64_t seed);

struct TimeAverageReport {
  std::vector<double> times;
  std::vector<double> instantaneous;     // site-mean deviation at each time
  std::vector<double> running_average;   // running time-average of the above
  double final_average = 0.0;
  double bound = 0.0;
  bool bound_satisfied = false;
};

/// Evolves psi0 under exp(-iHt) via spectral calculus and tracks the running
/// time-average of the per-site deviation from Omega's marginals. H must
/// commute with every composite charge (the sector construction), and psi0
/// must lie in range(P).
TimeAverageReport time_average_deviation(const SubspaceProjector& p, const HermitianOperator& h,
                                         const std::vector<HermitianOperator>& charges,
                                         const Vector& psi0, const std::vector<double>& times,
                                         const std::vector<Index>& site_dims);

}  // namespace qtmc
