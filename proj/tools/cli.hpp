#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtmc/gge.hpp"
#include "qtmc/serialize.hpp"

namespace qtmc::cli {

/// Parsed model file: charges with inverse temperatures plus the optional
/// system state and bath size most commands need.
struct ModelSpec {
  std::vector<HermitianOperator> charges;
  std::vector<double> betas;
  std::optional<DensityMatrix> system;
  Index bath_copies = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> scenario;
  // Scenario extras; meaningful only for the scenarios that define them.
  double moment_of_inertia = 1.0;
  std::vector<double> values;
  double delta = 0.25;
  Index copies = 4;
  std::optional<UnitaryOperator> unitary;
  Index target_level = 0;
  std::pair<Index, Index> trade_pair{0, 1};

  ChargeSystem charge_system() const { return ChargeSystem(charges, betas); }
};

/// Validates and expands a model document (UTF-8 JSON text). Scenario names
/// expand first; explicit fields override scenario defaults. Failures carry a
/// JSON-pointer path.
ModelSpec parse_model(const std::string& text);

/// Names understood by {"scenario": ...} and --scenario.
std::vector<std::string> scenario_names();

/// Entry point used by main() and by tests; returns the process exit code.
/// 0 = success, 2 = validation/parse error, 1 = runtime error (the error
/// name is printed on the diagnostic stream).
int run_command(const std::vector<std::string>& argv);

}  // namespace qtmc::cli
