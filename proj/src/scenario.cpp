#include "nullcone/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nullcone/coefficients_io.hpp"

namespace nullcone::scenario {

using nlohmann::json;

double ScenarioConfig::data_radius() const {
  double r = 0.0;
  for (const auto& p : f) r = std::max(r, p.is_zero() ? 0.0 : p.support_radius());
  for (const auto& p : g) r = std::max(r, p.is_zero() ? 0.0 : p.support_radius());
  for (const auto& F : forcing) r = std::max(r, F.support_radius());
  return r;
}

namespace {

std::vector<profiles::Profile> read_profiles(const json& doc, const char* key, int D) {
  std::vector<profiles::Profile> out;
  if (doc.contains(key)) {
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ConfigError(std::string("data.") + key + " must be an array");
    for (const auto& p : arr) out.push_back(profiles::profile_from_json(p));
  }
  if (static_cast<int>(out.size()) > D) throw ConfigError(std::string("data.") + key + " has more entries than components");
  out.resize(static_cast<std::size_t>(D), profiles::Profile::zero());
  return out;
}

}  // namespace

ScenarioConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  try {
    if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
    ScenarioConfig cfg;
    cfg.version = doc.value("version", 1);
    if (cfg.version != 1) throw ConfigError("unsupported scenario version");
    cfg.name = doc.value("name", std::string("scenario"));
    if (!doc.contains("coefficients")) throw ConfigError("scenario needs \"coefficients\"");
    const auto& co = doc.at("coefficients");
    if (co.is_object() && co.contains("file")) {
      std::filesystem::path p = co.at("file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      cfg.cs = nullform::load_coefficients(p);
    } else {
      cfg.cs = nullform::coefficients_from_json(co);
    }
    if (doc.contains("dim") && doc.at("dim").get<int>() != cfg.cs.dim) {
      throw ConfigError("scenario dim disagrees with the coefficient set");
    }
    const int D = cfg.cs.components();
    const json data = doc.value("data", json::object());
    cfg.f = read_profiles(data, "f", D);
    cfg.g = read_profiles(data, "g", D);
    if (doc.contains("forcing")) {
      for (const auto& F : doc.at("forcing")) cfg.forcing.push_back(profiles::forcing_from_json(F));
      if (static_cast<int>(cfg.forcing.size()) > D) throw ConfigError("more forcing entries than components");
    }
    cfg.forcing.resize(static_cast<std::size_t>(D), profiles::Forcing::none());
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      cfg.grid.h = g.value("h", cfg.grid.h);
      if (g.contains("extent") && !(g.at("extent").is_string() && g.at("extent") == "auto")) {
        cfg.grid.extent = g.at("extent").get<double>();
      }
      cfg.grid.symmetry = fields::symmetry_from_string(g.value("symmetry", std::string("full")));
      cfg.grid.cfl = g.value("cfl", cfg.grid.cfl);
    }
    cfg.T = doc.value("T", cfg.T);
    if (doc.contains("obstacle") && !doc.at("obstacle").is_null()) {
      exterior::ObstacleSpec ob;
      ob.radius = doc.at("obstacle").value("radius", 1.0);
      ob.validate();
      cfg.obstacle = ob;
    }
    if (doc.contains("diagnostics")) {
      const auto& d = doc.at("diagnostics");
      cfg.diagnostics.energy = d.value("energy", true);
      cfg.diagnostics.weighted = d.value("weighted", false);
      cfg.diagnostics.ks_times = d.value("ks_times", std::vector<double>{});
      if (d.contains("local_energy_radius") && !d.at("local_energy_radius").is_null()) cfg.diagnostics.local_energy_radius = d.at("local_energy_radius").get<double>();
      cfg.diagnostics.snapshot_stride = d.value("snapshot_stride", std::size_t{0});
      cfg.diagnostics.csv_slice = d.value("csv_slice", true);
    }
    cfg.blowup_factor = doc.value("blowup_factor", 1e4);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (!(cfg.grid.h > 0.0) || !std::isfinite(cfg.grid.h)) throw ConfigError("grid.h must be positive");
    if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T)) throw ConfigError("T must be non-negative");
    if (!(cfg.blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["version"] = cfg.version;
  doc["name"] = cfg.name;
  doc["dim"] = cfg.cs.dim;
  doc["coefficients"] = nullform::coefficients_to_json(cfg.cs);
  json f = json::array();
  json g = json::array();
  for (const auto& p : cfg.f) f.push_back(profiles::to_json(p));
  for (const auto& p : cfg.g) g.push_back(profiles::to_json(p));
  doc["data"] = {{"f", f}, {"g", g}};
  json F = json::array();
  for (const auto& x : cfg.forcing) F.push_back(profiles::to_json(x));
  doc["forcing"] = F;
  doc["grid"] = {{"h", cfg.grid.h},
                 {"extent", cfg.grid.extent ? json(*cfg.grid.extent) : json("auto")},
                 {"symmetry", fields::to_string(cfg.grid.symmetry)},
                 {"cfl", cfg.grid.cfl}};
  doc["T"] = cfg.T;
  doc["obstacle"] = cfg.obstacle ? json{{"radius", cfg.obstacle->radius}} : json(nullptr);
  doc["diagnostics"] = {{"energy", cfg.diagnostics.energy},
                        {"weighted", cfg.diagnostics.weighted},
                        {"ks_times", cfg.diagnostics.ks_times},
                        {"local_energy_radius", cfg.diagnostics.local_energy_radius
                                                    ? json(*cfg.diagnostics.local_energy_radius)
                                                    : json(nullptr)},
                        {"snapshot_stride", cfg.diagnostics.snapshot_stride},
                        {"csv_slice", cfg.diagnostics.csv_slice}};
  doc["blowup_factor"] = cfg.blowup_factor;
  doc["seed"] = cfg.seed;
  return doc;
}

solver::SimulationSetup build_setup(const ScenarioConfig& cfg) {
  const double c_max = cfg.cs.speeds.max();
  if (cfg.grid.cfl <= 0.0 || cfg.grid.cfl > fields::kMaxCfl) {
    throw fields::CflError("cfl must lie in (0, 0.9]");
  }
  if (cfg.grid.symmetry == fields::Symmetry::octant) {
    if (!solver::reflection_invariant(cfg.cs)) throw ConfigError("octant grids need a reflection-invariant nonlinearity");
    for (const auto& F : cfg.forcing) {
      if (F.active() && F.kind != profiles::Forcing::Kind::spacetime_bump) throw ConfigError("unsupported forcing");
    }
  }
  const double h = cfg.grid.h;
  double R = 0.0;
  if (cfg.grid.extent) {
    R = *cfg.grid.extent;
    const double need = cfg.data_radius() + c_max * cfg.T;
    if (R < need) {
      throw ConfigError("grid.extent " + json(R).dump() + " is smaller than the causal box " + json(need).dump());
    }
    R = std::ceil(R / h - 1e-9) * h;
  } else {
    R = solver::causal_extent(cfg.data_radius(), c_max, cfg.T, h, cfg.dim(), cfg.grid.symmetry);
  }
  const double dt = solver::choose_dt(h, c_max, cfg.grid.cfl);
  solver::SimulationSetup setup;
  setup.cs = cfg.cs;
  setup.grid = fields::Grid(cfg.dim(), h, R, dt, cfg.grid.symmetry);
  setup.grid.check_cfl(c_max, cfg.grid.cfl);
  setup.f = cfg.f;
  setup.g = cfg.g;
  setup.options.forcing = cfg.forcing;
  setup.options.blowup_factor = cfg.blowup_factor;
  if (cfg.obstacle) setup.options.pin_radius = cfg.obstacle->radius;
  setup.T = cfg.T;
  setup.snapshot_stride = cfg.diagnostics.snapshot_stride;
  return setup;
}

}  // namespace nullcone::scenario
