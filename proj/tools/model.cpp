#include <cmath>

#include "cli.hpp"

namespace qtmc::cli {

namespace {

json matrix_spec(const Matrix& m) { return matrix_to_json(m); }

json flywheel_defaults(double inertia) {
  Eigen::VectorXd l(5);
  l << -2, -1, 0, 1, 2;
  Matrix lm = l.cast<std::complex<double>>().asDiagonal();
  Matrix em = (l.array().square() / (2.0 * inertia)).matrix().cast<std::complex<double>>().asDiagonal();
  return json{{"charges", json::array({matrix_spec(em), matrix_spec(lm)})},
              {"betas", json::array({0.4, 0.3})},
              {"system", "maximally_mixed(5)"},
              {"bath_copies", 1}};
}

json scenario_defaults(const std::string& name, const json& raw) {
  if (name == "spin-xy") {
    return json{{"charges", json::array({"pauli_x", "pauli_y"})},
                {"betas", json::array({M_SQRT1_2, M_SQRT1_2})},
                {"system", "maximally_mixed(2)"},
                {"bath_copies", 1}};
  }
  if (name == "flywheel") {
    double inertia = 1.0;
    if (raw.contains("moment_of_inertia") && raw["moment_of_inertia"].is_number())
      inertia = raw["moment_of_inertia"].get<double>();
    return flywheel_defaults(inertia);
  }
  if (name == "spin-erasure") {
    Matrix h0 = Matrix::Zero(2, 2);
    return json{{"charges", json::array({matrix_spec(h0), "pauli_z"})},
                {"betas", json::array({1.0, -8.1})},
                {"system", "maximally_mixed(2)"},
                {"bath_copies", 1},
                {"unitary", "swap(2)"},
                {"target", 0}};
  }
  if (name == "pauli-ams") {
    return json{{"charges", json::array({"pauli_x", "pauli_z"})},
                {"betas", json::array({0.0, 0.0})},
                {"values", json::array({0.3, 0.3})},
                {"delta", 0.25},
                {"copies", 4},
                {"bath_copies", 1}};
  }
  if (name == "qubit-extract") {
    Matrix b(2, 2);
    b << 1, 0, 0, 0;
    return json{{"charges", json::array({"pauli_z", matrix_spec(b)})},
                {"betas", json::array({0.7, 0.4})},
                {"system", "maximally_mixed(2)"},
                {"bath_copies", 1}};
  }
  if (name == "qubit-trade") {
    Matrix a(2, 2), b(2, 2);
    a << 0, 0, 0, 1;
    b << 1, 0, 0, 0.1;
    return json{{"charges", json::array({matrix_spec(a), matrix_spec(b)})},
                {"betas", json::array({1.0, 1.0})},
                {"bath_copies", 1},
                {"pair", json::array({0, 1})}};
  }
  throw ParseError("/scenario", "unknown scenario '" + name + "'");
}

UnitaryOperator unitary_spec(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name.rfind("swap(", 0) == 0 && name.back() == ')') {
      Index d = std::stol(name.substr(5, name.size() - 6));
      if (d < 1) throw ParseError(path, "swap factor dimension must be >= 1");
      return UnitaryOperator::swap(d);
    }
  }
  return unitary_from_json(j, path);
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"spin-xy", "flywheel", "spin-erasure", "pauli-ams", "qubit-extract", "qubit-trade"};
}

ModelSpec parse_model(const std::string& text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!raw.is_object()) throw ParseError("", "expected a JSON object");

  json doc = raw;
  ModelSpec spec;
  if (raw.contains("scenario")) {
    if (!raw["scenario"].is_string()) throw ParseError("/scenario", "expected a string");
    spec.scenario = raw["scenario"].get<std::string>();
    doc = scenario_defaults(*spec.scenario, raw);
    for (auto& [key, value] : raw.items())
      if (key != "scenario") doc[key] = value;  // explicit fields win
  }

  if (!doc.contains("charges") || !doc["charges"].is_array() || doc["charges"].empty())
    throw ParseError("/charges", "required nonempty array of operator specs");
  for (size_t i = 0; i < doc["charges"].size(); ++i)
    spec.charges.push_back(
        hermitian_from_json(doc["charges"][i], "/charges/" + std::to_string(i)));

  if (!doc.contains("betas") || !doc["betas"].is_array())
    throw ParseError("/betas", "required array of numbers");
  if (doc["betas"].size() != doc["charges"].size())
    throw ParseError("/betas", "length mismatch");
  for (size_t i = 0; i < doc["betas"].size(); ++i) {
    if (!doc["betas"][i].is_number())
      throw ParseError("/betas/" + std::to_string(i), "expected a number");
    spec.betas.push_back(doc["betas"][i].get<double>());
  }

  Index dim = spec.charges.front().dim();
  for (size_t i = 0; i < spec.charges.size(); ++i)
    if (spec.charges[i].dim() != dim)
      throw ParseError("/charges/" + std::to_string(i), "dimension differs from charge 0");

  if (doc.contains("system")) spec.system = density_from_json(doc["system"], "/system");

  if (doc.contains("bath_copies")) {
    if (!doc["bath_copies"].is_number_integer() || doc["bath_copies"].get<Index>() < 0)
      throw ParseError("/bath_copies", "expected an integer >= 0");
    spec.bath_copies = doc["bath_copies"].get<Index>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
      throw ParseError("/seed", "expected a nonnegative integer");
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("moment_of_inertia")) {
    if (!doc["moment_of_inertia"].is_number() || doc["moment_of_inertia"].get<double>() <= 0)
      throw ParseError("/moment_of_inertia", "expected a positive number");
    spec.moment_of_inertia = doc["moment_of_inertia"].get<double>();
  }
  if (doc.contains("values")) {
    if (!doc["values"].is_array()) throw ParseError("/values", "expected an array of numbers");
    for (size_t i = 0; i < doc["values"].size(); ++i) {
      if (!doc["values"][i].is_number())
        throw ParseError("/values/" + std::to_string(i), "expected a number");
      spec.values.push_back(doc["values"][i].get<double>());
    }
  }
  if (doc.contains("delta")) {
    if (!doc["delta"].is_number() || doc["delta"].get<double>() <= 0)
      throw ParseError("/delta", "expected a positive number");
    spec.delta = doc["delta"].get<double>();
  }
  if (doc.contains("copies")) {
    if (!doc["copies"].is_number_integer() || doc["copies"].get<Index>() < 1)
      throw ParseError("/copies", "expected an integer >= 1");
    spec.copies = doc["copies"].get<Index>();
  }
  if (doc.contains("unitary")) spec.unitary = unitary_spec(doc["unitary"], "/unitary");
  if (doc.contains("target")) {
    if (!doc["target"].is_number_integer()) throw ParseError("/target", "expected an integer");
    spec.target_level = doc["target"].get<Index>();
  }
  if (doc.contains("pair")) {
    const json& p = doc["pair"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw ParseError("/pair", "expected two level indices");
    spec.trade_pair = {p[0].get<Index>(), p[1].get<Index>()};
  }
  return spec;
}

}  // namespace qtmc::cli
