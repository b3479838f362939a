#include "doctest.h"
#include "nullcone/scenario.hpp"
#include "nullcone/suites.hpp"

using namespace nullcone;
using nlohmann::json;

namespace {

const std::filesystem::path kDir = std::filesystem::path(NULLCONE_FIXTURE_DIR) / "scenarios";

json minimal() {
  return {{"version", 1},
          {"coefficients", {{"dim", 3}, {"speeds", {1.0}}}},
          {"data", {{"f", {{{"kind", "gaussian"}, {"amplitude", 1.0}, {"sigma", 1.0}}}}}},
          {"grid", {{"h", 0.5}, {"symmetry", "octant"}}},
          {"T", 2.0}};
}

}  // namespace

TEST_CASE("every scenario fixture loads and round-trips") {
  for (const auto& e : std::filesystem::directory_iterator(kDir)) {
    CAPTURE(e.path().string());
    const auto cfg = scenario::load_config(e.path());
    const auto doc = scenario::to_json(cfg);
    const auto back = scenario::config_from_json(doc);
    CHECK(scenario::to_json(back) == doc);
  }
}

TEST_CASE("invalid cfl is a CflError") {
  const auto cfg = scenario::load_config(kDir / "invalid_cfl.json");
  CHECK_THROWS_AS(scenario::build_setup(cfg), fields::CflError);
}

TEST_CASE("causal sizing") {
  const auto cfg = scenario::config_from_json(minimal());
  const auto setup = scenario::build_setup(cfg);
  CHECK(setup.grid.extent() >= cfg.data_radius() + cfg.T);
  CHECK(setup.grid.octant());
  auto doc = minimal();
  doc["grid"]["extent"] = 3.0;
  CHECK_THROWS_AS(scenario::build_setup(scenario::config_from_json(doc)), scenario::ConfigError);
}

TEST_CASE("bad documents raise ConfigError") {
  auto d = minimal();
  d["version"] = 2;
  CHECK_THROWS_AS(scenario::config_from_json(d), scenario::ConfigError);
  d = minimal();
  d.erase("coefficients");
  CHECK_THROWS_AS(scenario::config_from_json(d), scenario::ConfigError);
  d = minimal();
  d["grid"]["h"] = -1.0;
  CHECK_THROWS_AS(scenario::config_from_json(d), scenario::ConfigError);
  d = minimal();
  d["dim"] = 2;
  CHECK_THROWS_AS(scenario::config_from_json(d), scenario::ConfigError);
  d = minimal();
  d["data"]["f"].push_back(d["data"]["f"][0]);
  CHECK_THROWS_AS(scenario::config_from_json(d), scenario::ConfigError);
  CHECK_THROWS_AS(scenario::load_config(kDir / "does_not_exist.json"), scenario::ConfigError);
}

TEST_CASE("octant grids refuse odd nonlinearities") {
  auto d = minimal();
  d["coefficients"]["B"] = json::array({json::array({json::array({1, 1, 1, 0, 1}), 1.0})});
  CHECK_THROWS_AS(scenario::build_setup(scenario::config_from_json(d)), scenario::ConfigError);
}

TEST_CASE("suite registry") {
  const auto& names = suites::suite_names();
  CHECK(names.size() == 8);
  CHECK_THROWS_AS(suites::run_suite("nosuch"), suites::UnknownSuite);
}

TEST_CASE("cheap suite reports are byte-identical across reruns") {
  const auto a = suites::run_suite("commutators").report.dump();
  const auto b = suites::run_suite("commutators").report.dump();
  CHECK(a == b);
}
