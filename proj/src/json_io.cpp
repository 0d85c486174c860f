#include "toepmax/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "toepmax/errors.hpp"

namespace toepmax {

namespace {

long parse_diagonal_key(const std::string& key) {
  if (key.empty()) return -1;
  char* end = nullptr;
  const long v = std::strtol(key.c_str(), &end, 10);
  if (end != key.c_str() + key.size()) return -1;
  if (std::to_string(v) != key) return -1;  // no leading zeros or signs
  return v;
}

double require_finite_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number())
    throw InvalidInput(std::string("instance: ") + what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw InvalidInput(std::string("instance: ") + what + " must be finite");
  return v;
}

}  // namespace

PartialToeplitz partial_toeplitz_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("instance: expected a JSON object");
  if (auto it = j.find("schema"); it != j.end() && *it != kSchemaName)
    throw InvalidInput("instance: unsupported schema tag");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw InvalidInput("instance: missing integer field \"n\"");
  const long long n = j["n"].get<long long>();
  if (n < 2 || n > 100000) throw InvalidInput("instance: n out of range");
  if (!j.contains("t0"))
    throw InvalidInput("instance: missing field \"t0\"");
  const double t0 = require_finite_number(j["t0"], "\"t0\"");
  if (!j.contains("data") || !j["data"].is_object())
    throw InvalidInput("instance: missing object field \"data\"");

  std::vector<int> diagonals;
  std::vector<double> values;
  for (const auto& [key, value] : j["data"].items()) {
    const long d = parse_diagonal_key(key);
    if (d < 1 || d >= n)
      throw InvalidInput("instance: data key \"" + key +
                         "\" is not a diagonal index in [1, n-1]");
    diagonals.push_back(static_cast<int>(d));
    values.push_back(require_finite_number(value, "data value"));
  }
  // JSON object iteration is lexicographic on keys; re-sort numerically
  // keeping the pairing.
  std::vector<std::size_t> order(diagonals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return diagonals[a] < diagonals[b];
  });
  std::vector<int> sorted_d;
  std::vector<double> sorted_v;
  for (std::size_t i : order) {
    sorted_d.push_back(diagonals[i]);
    sorted_v.push_back(values[i]);
  }
  return PartialToeplitz(Pattern(static_cast<int>(n), sorted_d), t0,
                         sorted_v);
}

nlohmann::json partial_toeplitz_to_json(const PartialToeplitz& pt) {
  nlohmann::json data = nlohmann::json::object();
  const auto& diagonals = pt.pattern().diagonals();
  for (std::size_t i = 0; i < diagonals.size(); ++i)
    data[std::to_string(diagonals[i])] = pt.values()[i];
  return nlohmann::json{{"n", pt.order()}, {"t0", pt.t0()}, {"data", data}};
}

nlohmann::json matrix_to_json(const SymMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.order(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.order(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SymMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("matrix: expected a non-empty array of rows");
  const int n = static_cast<int>(j.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw InvalidInput("matrix: rows must all have length n");
    for (int k = 0; k < n; ++k)
      m(i, k) = require_finite_number(row[static_cast<std::size_t>(k)],
                                      "matrix entry");
  }
  return SymMatrix::from_dense(m);
}

}  // namespace toepmax
