#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "nullcone/nullform.hpp"

namespace nullcone::nullform {

/// Raised for unreadable or malformed coefficient documents.
class CoefficientParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse JSON form: {"dim", "speeds", "B": [[[I,J,K,j,k], v], ...], "Q", "B3", "Q3"}.
/// Component indices are 1-based, derivative slots 0-based. A document may
/// instead carry {"example": {...}} naming one of the built-in families.
nlohmann::json coefficients_to_json(const CoefficientSet& cs);
CoefficientSet coefficients_from_json(const nlohmann::json& doc);
CoefficientSet load_coefficients(const std::filesystem::path& path);

nlohmann::json null_report_to_json(const NullReport& report);
nlohmann::json symmetry_report_to_json(const std::vector<SymmetryViolation>& violations);

}  // namespace nullcone::nullform
