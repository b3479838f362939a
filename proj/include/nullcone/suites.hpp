#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace nullcone::suites {

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteOptions {
  /// Matrix document; defaults to <fixture_dir>/suites/<name>.json.
  std::optional<std::filesystem::path> config;
  std::filesystem::path fixture_dir = NULLCONE_FIXTURE_DIR;
  /// Override the grid spacing / final time of every case that has one.
  std::optional<double> h;
  std::optional<double> T;
};

struct Check {
  std::string id;
  bool pass = false;
};

/// Outcome of one suite. `report` holds no timestamps or wall times, so equal
/// inputs give byte-identical dumps.
struct SuiteResult {
  std::string name;
  bool pass = false;
  std::vector<Check> checks;
  nlohmann::json report;
};

const std::vector<std::string>& suite_names();

/// Throws UnknownSuite for a name outside suite_names(), and
/// scenario::ConfigError for a bad matrix document.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options = {});

SuiteResult run_we(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_kss(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_ks(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_divergence(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_commutators(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_led(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_decay(const nlohmann::json& matrix, const SuiteOptions& options);
SuiteResult run_convergence(const nlohmann::json& matrix, const SuiteOptions& options);

/// Loads <fixture_dir>/<relative> as JSON.
nlohmann::json load_fixture(const std::filesystem::path& fixture_dir, const std::filesystem::path& relative);

}  // namespace nullcone::suites
