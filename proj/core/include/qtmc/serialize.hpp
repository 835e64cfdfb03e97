#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "qtmc/operators.hpp"

namespace qtmc {

using json = nlohmann::ordered_json;

/// {"dim": n, "re": [[..]], "im": [[..]]}
json matrix_to_json(const Matrix& m);

/// Reads a dense complex matrix. "im" may be omitted for real matrices.
/// `path` is the JSON-pointer prefix used in ParseError messages.
Matrix matrix_from_json(const json& j, const std::string& path);

/// Operator spec: either the matrix object above or one of the named
/// shorthands "pauli_x", "pauli_y", "pauli_z", "identity(n)".
HermitianOperator hermitian_from_json(const json& j, const std::string& path);
DensityMatrix density_from_json(const json& j, const std::string& path);
UnitaryOperator unitary_from_json(const json& j, const std::string& path);

json to_json(const HermitianOperator& op);
json to_json(const DensityMatrix& rho);
json to_json(const UnitaryOperator& u);

/// Kind-tagged operator value for generic (untyped) plumbing such as file
/// loaders; tensor products require matching kinds.
struct OperatorValue {
  enum class Kind { Hermitian, Density, Unitary };
  Kind kind;
  Matrix entries;
};

OperatorValue tensor_product(const OperatorValue& a, const OperatorValue& b);

}  // namespace qtmc
