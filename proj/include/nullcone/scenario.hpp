#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nullcone/exterior.hpp"
#include "nullcone/nullform.hpp"
#include "nullcone/profiles.hpp"
#include "nullcone/solver.hpp"

namespace nullcone::scenario {

/// Invalid or inconsistent scenario document (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double h = 0.15;
  std::optional<double> extent;  // empty: causal extent
  fields::Symmetry symmetry = fields::Symmetry::full;
  double cfl = 0.5;
};

struct Diagnostics {
  bool energy = true;
  bool weighted = false;
  std::vector<double> ks_times;
  std::optional<double> local_energy_radius;
  std::size_t snapshot_stride = 0;
  bool csv_slice = true;
};

/// Full experiment description:
/// {"version": 1, "name", "dim", "coefficients": {...} | {"file": path},
///  "data": {"f": [profile...], "g": [profile...]}, "forcing": [forcing...],
///  "grid": {"h", "extent": "auto" | R, "symmetry", "cfl"}, "T",
///  "obstacle": {"radius"}, "diagnostics": {...}, "blowup_factor", "seed"}
struct ScenarioConfig {
  int version = 1;
  std::string name = "scenario";
  nullform::CoefficientSet cs;
  std::vector<profiles::Profile> f;
  std::vector<profiles::Profile> g;
  std::vector<profiles::Forcing> forcing;
  GridSpec grid;
  double T = 8.0;
  std::optional<exterior::ObstacleSpec> obstacle;
  Diagnostics diagnostics;
  double blowup_factor = 1e4;
  std::uint64_t seed = 0;

  int dim() const { return cs.dim; }
  /// Largest radius carrying data or forcing.
  double data_radius() const;
};

/// `base_dir` resolves relative coefficient file paths.
ScenarioConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical document (coefficients inlined); hashing this gives the config hash.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Grid and solver setup after causal sizing and CFL checks. Throws
/// ConfigError, fields::CflError or solver::MemoryBudgetError.
solver::SimulationSetup build_setup(const ScenarioConfig& cfg);

}  // namespace nullcone::scenario
