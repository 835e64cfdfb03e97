#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "qtmc/landauer.hpp"
#include "qtmc/microcanonical.hpp"
#include "qtmc/protocols.hpp"
#include "qtmc/random.hpp"
#include "qtmc/typicality.hpp"

namespace qtmc::cli {

namespace {

struct GlobalOpts {
  std::string out;
  std::string format;  // "", "json", "csv"
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", "invalid JSON in " + path + ": " + e.what());
  }
}

void write_output(const std::string& out, const std::string& payload) {
  if (out.empty()) {
    std::cout << payload;
    return;
  }
  std::filesystem::path target(out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write file: " + out);
    f << payload;
  }
  std::filesystem::rename(tmp, target);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Flatten a report object into "key,value" CSV rows (arrays expand by index).
std::string json_to_csv(const json& j) {
  std::ostringstream out;
  out << "key,value\n";
  for (auto& [key, value] : j.items()) {
    if (value.is_array()) {
      for (size_t i = 0; i < value.size(); ++i)
        if (value[i].is_number())
          out << key << "_" << i << "," << fmt_double(value[i].get<double>()) << "\n";
    } else if (value.is_number()) {
      out << key << "," << fmt_double(value.get<double>()) << "\n";
    } else if (value.is_boolean()) {
      out << key << "," << (value.get<bool>() ? 1 : 0) << "\n";
    }
  }
  return out.str();
}

ModelSpec load_model(const std::string& model_path, const std::string& scenario) {
  if (!model_path.empty()) return parse_model(slurp(model_path));
  if (!scenario.empty()) return parse_model("{\"scenario\": \"" + scenario + "\"}");
  throw ValidationError("either --model or --scenario is required");
}

std::uint64_t effective_seed(const GlobalOpts& g, const ModelSpec& spec) {
  return g.seed_given ? g.seed : spec.seed;
}

// Charges from a comma list of operator names or from a JSON file holding an
// array of operator specs.
std::vector<HermitianOperator> load_charges(const std::string& arg) {
  if (arg.empty()) throw ValidationError("--charges is required");
  if (std::filesystem::exists(arg)) {
    json doc = parse_json_file(arg);
    if (!doc.is_array() || doc.empty())
      throw ParseError("", "charges file must hold a nonempty JSON array");
    std::vector<HermitianOperator> out;
    for (size_t i = 0; i < doc.size(); ++i)
      out.push_back(hermitian_from_json(doc[i], "/" + std::to_string(i)));
    return out;
  }
  std::vector<HermitianOperator> out;
  std::stringstream ss(arg);
  std::string name;
  while (std::getline(ss, name, ','))
    out.push_back(hermitian_from_json(json(name), "/charges"));
  return out;
}

std::vector<double> parse_reals(const std::string& arg, const char* what) {
  std::vector<double> out;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw ValidationError(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<Index> parse_n_range(const std::string& arg) {
  // "2..6" or "2,3,4"
  auto dots = arg.find("..");
  std::vector<Index> out;
  if (dots != std::string::npos) {
    Index lo = std::stol(arg.substr(0, dots));
    Index hi = std::stol(arg.substr(dots + 2));
    for (Index n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    for (double v : parse_reals(arg, "--n")) out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw ValidationError("--n: empty range");
  return out;
}

json ledger_to_json(const WorkLedger& lg) {
  return json{{"delta_system", lg.delta_system},
              {"delta_bath", lg.delta_bath},
              {"work", lg.work},
              {"delta_entropy_system", lg.delta_entropy_system},
              {"delta_entropy_bath", lg.delta_entropy_bath},
              {"free_entropy_change_system", lg.free_entropy_change_system},
              {"free_entropy_change_bath", lg.free_entropy_change_bath}};
}

std::string trace_to_csv(const ProtocolTrace& trace, const std::vector<double>& betas) {
  std::ostringstream out;
  size_t k = betas.size();
  out << "step";
  for (size_t i = 0; i < k; ++i) out << ",dW_" << i;
  out << ",dF_system,dF_bath,slack\n";
  WorkLedger running(k);
  for (size_t s = 0; s < trace.steps.size(); ++s) {
    running.accumulate(trace.steps[s]);
    double weighted = 0.0;
    for (size_t i = 0; i < k; ++i) weighted += betas[i] * running.work[i];
    double slack = -running.free_entropy_change_system - weighted;
    out << s;
    for (size_t i = 0; i < k; ++i) out << "," << fmt_double(trace.steps[s].work[i]);
    out << "," << fmt_double(trace.steps[s].free_entropy_change_system);
    out << "," << fmt_double(trace.steps[s].free_entropy_change_bath);
    out << "," << fmt_double(slack) << "\n";
  }
  return out.str();
}

const json& require_field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw ParseError(std::string("/") + key, "missing field");
  return doc[key];
}

SubspaceProjector projector_from_json(const json& doc) {
  SubspaceProjector p;
  p.projector = matrix_from_json(require_field(doc, "projector"), "/projector");
  p.dim_subspace = require_field(doc, "dim_subspace").get<Index>();
  p.window_center = require_field(doc, "values").get<std::vector<double>>();
  p.window_halfwidth = require_field(doc, "delta").get<double>();
  p.sharpness_tolerance = require_field(doc, "eta").get<double>();
  HermEigen e = herm_eigen(p.projector);
  Matrix basis(p.projector.rows(), p.dim_subspace);
  Index col = 0;
  for (Index i = 0; i < e.values.size() && col < p.dim_subspace; ++i)
    if (e.values(i) > 0.5) basis.col(col++) = e.vectors.col(i);
  if (col != p.dim_subspace)
    throw ValidationError("ams file: projector rank disagrees with dim_subspace");
  p.basis = std::move(basis);
  return p;
}

// ---- subcommand bodies ----

void cmd_gge_build(const GlobalOpts& g, const std::string& model_path,
                   const std::string& scenario, const std::string& charges_arg,
                   const std::string& betas_arg) {
  ModelSpec spec = [&] {
    if (!charges_arg.empty()) {
      ModelSpec m;
      m.charges = load_charges(charges_arg);
      m.betas = parse_reals(betas_arg, "--betas");
      if (m.betas.size() != m.charges.size())
        throw ValidationError("--betas: length mismatch with --charges");
      return m;
    }
    return load_model(model_path, scenario);
  }();
  GGEState gge = build_gge(spec.charge_system());
  json out{{"log_partition", gge.log_partition},
           {"entropy", von_neumann_entropy(gge.state)},
           {"charge_expectations", [&] {
              std::vector<double> e;
              for (const auto& q : spec.charges) e.push_back(expectation(q, gge.state));
              return e;
            }()},
           {"state", to_json(gge.state)}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_gge_solve(const GlobalOpts& g, const std::string& request_path,
                   const std::string& charges_arg, const std::string& targets_arg, double tol,
                   int max_iter) {
  std::vector<HermitianOperator> charges;
  std::vector<double> targets;
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  if (!request_path.empty()) {
    // {"charges": [...], "targets": [...], "tol": ..., "max_iter": ...}
    json doc = parse_json_file(request_path);
    if (!doc.is_object() || !doc.contains("charges") || !doc.contains("targets"))
      throw ParseError("", "solve request needs charges and targets");
    for (size_t i = 0; i < doc["charges"].size(); ++i)
      charges.push_back(hermitian_from_json(doc["charges"][i], "/charges/" + std::to_string(i)));
    if (!doc["targets"].is_array()) throw ParseError("/targets", "expected an array");
    for (size_t i = 0; i < doc["targets"].size(); ++i) {
      if (!doc["targets"][i].is_number())
        throw ParseError("/targets/" + std::to_string(i), "expected a number");
      targets.push_back(doc["targets"][i].get<double>());
    }
    if (doc.contains("tol")) opts.tol = doc["tol"].get<double>();
    if (doc.contains("max_iter")) opts.max_iter = doc["max_iter"].get<int>();
  } else {
    charges = load_charges(charges_arg);
    targets = parse_reals(targets_arg, "--targets");
  }
  if (targets.size() != charges.size())
    throw ParseError("/targets", "length mismatch");
  auto [betas, diag] = solve_beta(charges, targets, opts);

  GGEState rebuilt = build_gge(ChargeSystem(charges, betas));
  std::vector<double> residuals;
  for (size_t i = 0; i < charges.size(); ++i)
    residuals.push_back(expectation(charges[i], rebuilt.state) - targets[i]);

  json out{{"betas", betas},
           {"log_partition", rebuilt.log_partition},
           {"iterations", diag.iterations},
           {"gradient_norm", diag.gradient_norm},
           {"dual_value", diag.dual_value},
           {"residuals", residuals}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_protocol_extract(const GlobalOpts& g, const std::string& model_path,
                          const std::string& scenario, double delta_p, int rounds) {
  ModelSpec spec = load_model(model_path, scenario);
  if (!spec.system) throw ValidationError("model needs a \"system\" state");
  if (spec.bath_copies < 1) throw ValidationError("model needs bath_copies >= 1");
  BathModel bath(spec.charge_system(), spec.bath_copies);
  ProtocolTrace trace = extraction_protocol(*spec.system, bath, delta_p, rounds);
  if (g.format == "json") {
    json steps = json::array();
    for (const auto& s : trace.steps) steps.push_back(ledger_to_json(s));
    json out{{"steps", steps},
             {"cumulative", ledger_to_json(trace.cumulative)},
             {"second_law_slack", trace.second_law_slack},
             {"basis_aligned", trace.basis_aligned}};
    write_output(g.out, dump(out));
  } else {
    write_output(g.out, trace_to_csv(trace, spec.betas));
  }
}

void cmd_protocol_trade(const GlobalOpts& g, const std::string& model_path,
                        const std::string& scenario, const std::string& pair_arg) {
  ModelSpec spec = load_model(model_path, scenario);
  std::pair<Index, Index> pair = spec.trade_pair;
  if (!pair_arg.empty()) {
    auto v = parse_reals(pair_arg, "--pair");
    if (v.size() != 2) throw ValidationError("--pair: expected two level indices");
    pair = {static_cast<Index>(v[0]), static_cast<Index>(v[1])};
  }
  BathModel bath(spec.charge_system(), std::max<Index>(1, spec.bath_copies));
  WorkLedger lg = trade_resources(bath, pair);
  double identity = 0.0;
  for (size_t i = 0; i < spec.betas.size(); ++i) identity += spec.betas[i] * lg.delta_bath[i];
  json out = ledger_to_json(lg);
  out["identity_residual"] = identity - lg.free_entropy_change_bath;
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_protocol_audit(const GlobalOpts& g, const std::string& model_path,
                        const std::string& scenario, int trials) {
  ModelSpec spec = load_model(model_path, scenario);
  if (spec.bath_copies < 1) throw ValidationError("model needs bath_copies >= 1");
  BathModel bath(spec.charge_system(), spec.bath_copies);
  DensityMatrix system = spec.system ? *spec.system : bath.particle_state();
  Index joint = system.dim();
  for (Index l = 0; l < bath.copies; ++l) joint *= bath.particle_dim();

  std::uint64_t seed = effective_seed(g, spec);
  double min_slack = std::numeric_limits<double>::infinity();
  double max_kp = -std::numeric_limits<double>::infinity();
  int slack_violations = 0, kp_violations = 0;
  DensityMatrix thermal = bath.particle_state();
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(SeededRng::derive_seed(seed, static_cast<std::uint64_t>(t)));
    UnitaryOperator u = random_unitary(joint, rng);
    auto [state, ledger] = run_unitary(system, bath, u);
    ProtocolTrace trace = ProtocolTrace::from_steps({ledger}, spec.betas);
    SecondLawAudit audit = second_law_audit(trace, spec.betas);
    min_slack = std::min(min_slack, audit.slack);
    if (audit.slack < -1e-9) ++slack_violations;

    auto [state2, ledger2] = run_unitary(thermal, bath, u);
    ProtocolTrace trace2 = ProtocolTrace::from_steps({ledger2}, spec.betas);
    SecondLawAudit kp = second_law_audit(trace2, spec.betas);
    max_kp = std::max(max_kp, kp.lhs);
    if (kp.lhs > 1e-9) ++kp_violations;
  }
  json out{{"trials", trials},
           {"min_slack", min_slack},
           {"slack_violations", slack_violations},
           {"max_thermal_weighted_work", max_kp},
           {"kelvin_planck_violations", kp_violations},
           {"seed", seed}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_landauer_erase(const GlobalOpts& g, const std::string& model_path,
                        const std::string& scenario, const std::string& unitary_arg,
                        int target_level) {
  ModelSpec spec = load_model(model_path, scenario);
  if (!spec.system) throw ValidationError("model needs a \"system\" state");
  if (spec.bath_copies < 1) throw ValidationError("model needs bath_copies >= 1");
  BathModel bath(spec.charge_system(), spec.bath_copies);

  UnitaryOperator u = [&]() -> UnitaryOperator {
    if (!unitary_arg.empty()) {
      if (unitary_arg == "swap") return UnitaryOperator::swap(spec.system->dim());
      return unitary_from_json(parse_json_file(unitary_arg), "");
    }
    if (spec.unitary) return *spec.unitary;
    throw ValidationError("either --unitary or a model \"unitary\" is required");
  }();

  Index target = target_level >= 0 ? target_level : spec.target_level;
  ErasureReport report =
      erase(*spec.system, bath, u, DensityMatrix::basis_state(spec.system->dim(), target));
  LandauerCheck check = landauer_bound_check(report);
  json out{{"delta_S_system", report.delta_S_system},
           {"mutual_information", report.mutual_information},
           {"heat_flows", report.heat_flows},
           {"weighted_heat", report.weighted_heat},
           {"bath_relative_entropy", report.bath_relative_entropy},
           {"erasure_quality", report.erasure_quality},
           {"bound_lhs", check.lhs},
           {"bound_rhs", check.rhs},
           {"bound_satisfied", check.satisfied}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_micro_ams(const GlobalOpts& g, const std::string& base_arg, Index copies,
                   const std::string& values_arg, double delta, double eta) {
  auto base = load_charges(base_arg);
  auto values = parse_reals(values_arg, "--values");
  CompositeChargeSet set = composite_average(base, copies);
  CommutingApproximants approx = joint_diagonalize(set);
  SubspaceProjector p = build_ams(approx, values, delta, eta);

  json base_json = json::array();
  for (const auto& q : base) base_json.push_back(to_json(q));
  json out{{"base", base_json},
           {"copies", copies},
           {"values", values},
           {"delta", delta},
           {"eta", eta},
           {"dim_subspace", p.dim_subspace},
           {"residual", approx.residual},
           {"deviation", approx.deviation},
           {"projector", matrix_to_json(p.projector)}};
  write_output(g.out, dump(out));
}

void cmd_micro_scan(const GlobalOpts& g, const std::string& base_arg,
                    const std::string& values_arg, const std::string& n_arg, double delta,
                    double eta) {
  auto base = load_charges(base_arg);
  auto values = parse_reals(values_arg, "--values");
  auto n_range = parse_n_range(n_arg);
  auto rows = reduced_state_scan(base, values, n_range, delta, eta);
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back(json{{"copies", r.copies},
                         {"dim_subspace", r.dim_subspace},
                         {"avg_relative_entropy", r.avg_relative_entropy},
                         {"betas", r.betas}});
    write_output(g.out, dump(arr));
  } else {
    std::ostringstream csv;
    csv << "N,dim_subspace,avg_relative_entropy\n";
    for (const auto& r : rows)
      csv << r.copies << "," << r.dim_subspace << "," << fmt_double(r.avg_relative_entropy)
          << "\n";
    write_output(g.out, csv.str());
  }
}

void cmd_typicality_sample(const GlobalOpts& g, const std::string& ams_path, int trials) {
  json doc = parse_json_file(ams_path);
  SubspaceProjector p = projector_from_json(doc);
  Index copies = require_field(doc, "copies").get<Index>();
  Index site = require_field(doc, "base").at(0).at("dim").get<Index>();
  std::vector<Index> dims(copies, site);
  TypicalityReport rep = sample_typicality(p, dims, trials, g.seed);
  json out{{"trials", rep.trials},
           {"mean_deviation", rep.mean_deviation},
           {"max_deviation", rep.max_deviation},
           {"bound", rep.bound},
           {"per_site", rep.per_site},
           {"standard_error", rep.standard_error},
           {"bound_satisfied", rep.bound_satisfied},
           {"seed", g.seed}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

void cmd_typicality_evolve(const GlobalOpts& g, const std::string& ams_path,
                           const std::string& hamiltonian_arg, double tmax, int steps) {
  json doc = parse_json_file(ams_path);
  SubspaceProjector p = projector_from_json(doc);
  Index copies = require_field(doc, "copies").get<Index>();
  json base_json = require_field(doc, "base");
  std::vector<HermitianOperator> base;
  for (size_t i = 0; i < base_json.size(); ++i)
    base.push_back(hermitian_from_json(base_json[i], "/base/" + std::to_string(i)));
  Index site = base.front().dim();
  std::vector<Index> dims(copies, site);
  CompositeChargeSet set = composite_average(base, copies);

  HermitianOperator h = [&]() -> HermitianOperator {
    if (hamiltonian_arg == "zsector") {
      if (site != 2) throw ValidationError("zsector Hamiltonian needs qubit sites");
      Matrix hm = Matrix::Zero(p.projector.rows(), p.projector.rows());
      for (Index l = 0; l < copies; ++l)
        hm += (1.0 + 0.1 * static_cast<double>(l)) *
              embed_at(pauli_z().matrix(), static_cast<size_t>(l), dims);
      return HermitianOperator(std::move(hm));
    }
    return hermitian_from_json(parse_json_file(hamiltonian_arg), "");
  }();

  SeededRng rng(g.seed);
  Vector psi0 = haar_state_in_span(p.basis, rng);
  std::vector<double> times;
  for (int i = 0; i < steps; ++i)
    times.push_back(tmax * static_cast<double>(i) / std::max(1, steps - 1));
  TimeAverageReport rep = time_average_deviation(p, h, set.composite, psi0, times, dims);
  json out{{"final_average", rep.final_average},
           {"bound", rep.bound},
           {"bound_satisfied", rep.bound_satisfied},
           {"times", rep.times},
           {"instantaneous", rep.instantaneous},
           {"running_average", rep.running_average},
           {"seed", g.seed}};
  write_output(g.out, g.format == "csv" ? json_to_csv(out) : dump(out));
}

}  // namespace

int run_command(const std::vector<std::string>& argv) {
  CLI::App app{"quantum thermodynamics with multiple conserved charges"};
  app.require_subcommand(1);

  GlobalOpts g;
  CLI::Option* seed_opt =
      app.add_option("--seed", g.seed, "seed for randomized commands")->group("Global");
  app.add_option("--out", g.out, "output file (default: stdout)")->group("Global");
  app.add_option("--format", g.format, "json|csv")->group("Global")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string model_path, scenario, charges_arg, betas_arg, targets_arg, pair_arg;
  std::string unitary_arg, values_arg, n_arg, ams_path, hamiltonian_arg, base_arg, request_path;
  double tol = 1e-9, delta_p = 0.01, delta = 0.25, eta = 0.2, tmax = 100.0;
  int max_iter = 100000, rounds = 5000, trials = 500, steps = 200, target_level = -1;
  Index copies = 4;

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_path, "model JSON file");
    cmd->add_option("--scenario", scenario, "named scenario")
        ->check(CLI::IsMember(scenario_names()));
  };

  CLI::App* gge = app.add_subcommand("gge", "generalized Gibbs ensembles");
  CLI::App* gge_build = gge->add_subcommand("build", "construct tau(beta) and ln Z");
  add_model(gge_build);
  gge_build->add_option("--charges", charges_arg, "comma list of names or a JSON file");
  gge_build->add_option("--betas", betas_arg, "comma list of inverse temperatures");
  CLI::App* gge_solve = gge->add_subcommand("solve", "invert target expectations to beta");
  gge_solve->add_option("--request", request_path, "solve request JSON file");
  gge_solve->add_option("--charges", charges_arg);
  gge_solve->add_option("--targets", targets_arg);
  gge_solve->add_option("--tol", tol);
  gge_solve->add_option("--max-iter", max_iter);

  CLI::App* protocol = app.add_subcommand("protocol", "work extraction and trading");
  CLI::App* p_extract = protocol->add_subcommand("extract", "thermalization work extraction");
  add_model(p_extract);
  p_extract->add_option("--delta-p", delta_p);
  p_extract->add_option("--rounds", rounds);
  CLI::App* p_trade = protocol->add_subcommand("trade", "swap a level pair on every bath copy");
  add_model(p_trade);
  p_trade->add_option("--pair", pair_arg, "i,j");
  CLI::App* p_audit = protocol->add_subcommand("audit", "random-unitary second-law audit");
  add_model(p_audit);
  p_audit->add_option("--trials", trials);

  CLI::App* landauer = app.add_subcommand("landauer", "erasure accounting");
  CLI::App* l_erase = landauer->add_subcommand("erase", "run one erasure unitary");
  add_model(l_erase);
  l_erase->add_option("--unitary", unitary_arg, "JSON file or 'swap'");
  l_erase->add_option("--target", target_level, "target basis level");

  CLI::App* micro = app.add_subcommand("micro", "approximate microcanonical subspaces");
  CLI::App* m_ams = micro->add_subcommand("ams", "build a subspace projector");
  m_ams->add_option("--base", base_arg, "charges file or comma list")->required();
  m_ams->add_option("--copies", copies)->required();
  m_ams->add_option("--values", values_arg)->required();
  m_ams->add_option("--delta", delta);
  m_ams->add_option("--eta", eta);
  CLI::App* m_scan = micro->add_subcommand("scan", "reduced-state scan over N");
  m_scan->add_option("--base", base_arg)->required();
  m_scan->add_option("--values", values_arg)->required();
  m_scan->add_option("--n", n_arg, "range like 2..6")->required();
  m_scan->add_option("--delta", delta);
  m_scan->add_option("--eta", eta);

  CLI::App* typ = app.add_subcommand("typicality", "canonical typicality checks");
  CLI::App* t_sample = typ->add_subcommand("sample", "Haar states in an AMS subspace");
  t_sample->add_option("--ams", ams_path)->required();
  t_sample->add_option("--trials", trials);
  CLI::App* t_evolve = typ->add_subcommand("evolve", "time-averaged deviation");
  t_evolve->add_option("--ams", ams_path)->required();
  t_evolve->add_option("--hamiltonian", hamiltonian_arg, "JSON file or 'zsector'")->required();
  t_evolve->add_option("--tmax", tmax);
  t_evolve->add_option("--steps", steps);

  // global flags may follow the subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    cmd->fallthrough();
    for (CLI::App* sub : cmd->get_subcommands({})) enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  std::vector<const char*> cargv;
  cargv.push_back("qtmc");
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (gge_build->parsed()) cmd_gge_build(g, model_path, scenario, charges_arg, betas_arg);
    if (gge_solve->parsed())
      cmd_gge_solve(g, request_path, charges_arg, targets_arg, tol, max_iter);
    if (p_extract->parsed()) cmd_protocol_extract(g, model_path, scenario, delta_p, rounds);
    if (p_trade->parsed()) cmd_protocol_trade(g, model_path, scenario, pair_arg);
    if (p_audit->parsed()) cmd_protocol_audit(g, model_path, scenario, trials);
    if (l_erase->parsed()) cmd_landauer_erase(g, model_path, scenario, unitary_arg, target_level);
    if (m_ams->parsed()) cmd_micro_ams(g, base_arg, copies, values_arg, delta, eta);
    if (m_scan->parsed()) cmd_micro_scan(g, base_arg, values_arg, n_arg, delta, eta);
    if (t_sample->parsed()) cmd_typicality_sample(g, ams_path, trials);
    if (t_evolve->parsed()) cmd_typicality_evolve(g, ams_path, hamiltonian_arg, tmax, steps);
  } catch (const ParseError& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qtmc::cli
