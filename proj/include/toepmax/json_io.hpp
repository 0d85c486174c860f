#pragma once

#include <string>

#include <json.hpp>

#include "toepmax/partial_toeplitz.hpp"
#include "toepmax/sym_matrix.hpp"

namespace toepmax {

inline constexpr const char* kSchemaName = "toeplitz-maxdet/1";

// Instance schema: {"n": 5, "t0": 6.0, "data": {"1": 1.0, "3": 1.0}}.
// Keys of "data" are the specified off-diagonals as decimal strings.
// Throws InvalidInput on malformed input.
PartialToeplitz partial_toeplitz_from_json(const nlohmann::json& j);

nlohmann::json partial_toeplitz_to_json(const PartialToeplitz& pt);

// Full symmetric matrix as a row-major array of row arrays.
nlohmann::json matrix_to_json(const SymMatrix& m);
SymMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace toepmax
