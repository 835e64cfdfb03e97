#include "qtmc/serialize.hpp"

#include <optional>
#include <regex>

namespace qtmc {

json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array();
    json irow = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

Eigen::MatrixXd real_part_from_json(const json& j, const std::string& path, Index dim) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    throw ParseError(path, "expected " + std::to_string(dim) + " rows");
  Eigen::MatrixXd out(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      throw ParseError(path + "/" + std::to_string(i),
                       "expected " + std::to_string(dim) + " entries");
    for (Index k = 0; k < dim; ++k) {
      const json& v = row[static_cast<size_t>(k)];
      if (!v.is_number())
        throw ParseError(path + "/" + std::to_string(i) + "/" + std::to_string(k),
                         "expected a number");
      out(i, k) = v.get<double>();
    }
  }
  return out;
}

std::optional<Matrix> named_operator(const std::string& name) {
  if (name == "pauli_x") return pauli_x().matrix();
  if (name == "pauli_y") return pauli_y().matrix();
  if (name == "pauli_z") return pauli_z().matrix();
  static const std::regex id_re(R"(identity\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, id_re)) {
    Index n = std::stol(m[1].str());
    if (n < 1) return std::nullopt;
    return Matrix(Matrix::Identity(n, n));
  }
  return std::nullopt;
}

Matrix operand_matrix(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto m = named_operator(j.get<std::string>());
    if (!m) throw ParseError(path, "unknown operator name '" + j.get<std::string>() + "'");
    return *m;
  }
  return matrix_from_json(j, path);
}

}  // namespace

Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object with dim/re/im");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ParseError(path + "/dim", "expected an integer dimension");
  Index dim = j["dim"].get<Index>();
  if (dim < 1) throw ParseError(path + "/dim", "dimension must be >= 1");
  if (!j.contains("re")) throw ParseError(path + "/re", "missing real part");
  Eigen::MatrixXd re = real_part_from_json(j["re"], path + "/re", dim);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(dim, dim);
  if (j.contains("im")) im = real_part_from_json(j["im"], path + "/im", dim);
  return re.cast<std::complex<double>>() +
         std::complex<double>(0, 1) * im.cast<std::complex<double>>();
}

HermitianOperator hermitian_from_json(const json& j, const std::string& path) {
  try {
    return HermitianOperator(operand_matrix(j, path));
  } catch (const ValidationError& e) {
    throw ParseError(path, e.what());
  }
}

DensityMatrix density_from_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    static const std::regex mixed_re(R"(maximally_mixed\((\d+)\))");
    static const std::regex basis_re(R"(basis\((\d+),(\d+)\))");
    std::smatch m;
    if (std::regex_match(name, m, mixed_re))
      return DensityMatrix::maximally_mixed(std::stol(m[1].str()));
    if (std::regex_match(name, m, basis_re))
      return DensityMatrix::basis_state(std::stol(m[2].str()), std::stol(m[1].str()));
    throw ParseError(path, "unknown state name '" + name + "'");
  }
  try {
    return DensityMatrix(matrix_from_json(j, path));
  } catch (const ValidationError& e) {
    throw ParseError(path, e.what());
  }
}

UnitaryOperator unitary_from_json(const json& j, const std::string& path) {
  try {
    return UnitaryOperator(operand_matrix(j, path));
  } catch (const ValidationError& e) {
    throw ParseError(path, e.what());
  }
}

json to_json(const HermitianOperator& op) { return matrix_to_json(op.matrix()); }
json to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }
json to_json(const UnitaryOperator& u) { return matrix_to_json(u.matrix()); }

OperatorValue tensor_product(const OperatorValue& a, const OperatorValue& b) {
  if (a.kind != b.kind)
    throw KindMismatch("tensor_product: operands must be the same operator kind");
  return OperatorValue{a.kind, kron(a.entries, b.entries)};
}

}  // namespace qtmc
