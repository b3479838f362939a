// nullcone: check-null | simulate | verify <suite>
// Exit codes: 0 pass, 1 criterion failure, 2 usage/config error, 3 blow-up.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nullcone/coefficients_io.hpp"
#include "nullcone/exterior.hpp"
#include "nullcone/field_io.hpp"
#include "nullcone/manifest.hpp"
#include "nullcone/parallel.hpp"
#include "nullcone/scenario.hpp"
#include "nullcone/suites.hpp"
#include "nullcone/weighted.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nullcone;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kBlowup = 3;

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<int> threads;
  std::optional<double> h;
  std::optional<double> T;
  int samples = 256;
  std::string suite;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw scenario::ConfigError("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct ManifestScope {
  manifest::RunManifest m;
  fs::path dir;

  ManifestScope(std::string command, fs::path out) : dir(std::move(out)) {
    m.command = std::move(command);
    m.started = manifest::utc_timestamp();
  }
  void add(const fs::path& p) { m.outputs.push_back(p.filename().string()); }
  int close(int code) {
    m.exit_code = code;
    m.finished = manifest::utc_timestamp();
    manifest::write_json(dir / "manifest.json", m.to_json());
    return code;
  }
};

int cmd_check_null(const Options& o) {
  const auto text = read_file(o.config);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw nullform::CoefficientParseError(std::string("malformed JSON: ") + e.what());
  }
  const auto cs = nullform::coefficients_from_json(doc);
  const auto report = nullform::check_null(cs, o.samples);
  json out = nullform::null_report_to_json(report);
  out["symmetry"] = nullform::symmetry_report_to_json(nullform::validate_symmetry(cs.q));

  ManifestScope scope("check-null", o.out);
  scope.m.config_hash = manifest::fnv1a_hex(nullform::coefficients_to_json(cs).dump());
  scope.m.content_id = manifest::git_blob_id(text);
  scope.m.criteria["null_condition"] = report.holds();
  const auto path = fs::path(o.out) / "null_report.json";
  manifest::write_json(path, out);
  scope.add(path);
  std::cout << (report.holds() ? "null condition holds" : "null condition violated") << " (worst residual "
            << manifest::format_double(report.worst_residual) << ")\n";
  return scope.close(report.holds() ? kPass : kFail);
}

int cmd_simulate(const Options& o) {
  const auto text = read_file(o.config);
  auto cfg = scenario::load_config(o.config);
  if (o.h) cfg.grid.h = *o.h;
  if (o.T) cfg.T = *o.T;
  const auto setup = scenario::build_setup(cfg);
  const fs::path dir = o.out;
  fs::create_directories(dir);

  ManifestScope scope("simulate", dir);
  scope.m.config_hash = manifest::fnv1a_hex(scenario::to_json(cfg).dump());
  scope.m.content_id = manifest::git_blob_id(text);

  std::vector<std::pair<std::string, fit::Series>> series;
  json summary;
  solver::Trajectory traj;
  if (cfg.obstacle) {
    const double R_loc = cfg.diagnostics.local_energy_radius.value_or(4.0);
    auto run = exterior::simulate_masked_exterior(setup, *cfg.obstacle, R_loc);
    traj = std::move(run.trajectory);
    series.emplace_back("local_energy", run.local_energy);
    series.emplace_back("energy", run.energy);
    summary["collar_ratio"] = run.collar_ratio;
    summary["local_energy_radius"] = R_loc;
  } else {
    std::vector<solver::FrameObserver*> observers;
    weighted::EnergySeriesObserver energy(cfg.cs.speeds);
    std::optional<exterior::LocalEnergyObserver> local;
    std::optional<weighted::KsObserver> ks;
    if (cfg.diagnostics.energy) observers.push_back(&energy);
    if (cfg.diagnostics.local_energy_radius) {
      local.emplace(-1.0, *cfg.diagnostics.local_energy_radius, cfg.cs.speeds);
      local->observe_data(solver::sample_profiles(setup.grid, setup.f), solver::sample_profiles(setup.grid, setup.g));
      observers.push_back(&*local);
    }
    if (!cfg.diagnostics.ks_times.empty()) {
      ks.emplace(cfg.cs.speeds[0], cfg.diagnostics.ks_times);
      observers.push_back(&*ks);
    }
    traj = solver::simulate(setup, observers);
    if (cfg.diagnostics.energy) {
      series.emplace_back("energy", energy.energy);
      series.emplace_back("sup_gradient", energy.sup);
    }
    if (local) series.emplace_back("local_energy", local->series());
    if (ks) {
      json list = json::array();
      for (const auto& s : ks->samples()) list.push_back(weighted::to_json(s));
      summary["ks_samples"] = list;
    }
    if (cfg.diagnostics.weighted && cfg.cs.is_linear()) {
      const auto norms = weighted::weighted_norms(setup);
      summary["weighted"] = weighted::to_json(norms);
    }
  }

  summary["name"] = cfg.name;
  summary["config"] = scenario::to_json(cfg);
  summary["steps"] = traj.steps;
  summary["dt"] = traj.dt;
  summary["t_end"] = traj.t_end;
  summary["extent"] = setup.grid.extent();
  summary["nodes"] = setup.grid.size();
  summary["initial_sup"] = traj.initial_sup;
  summary["blowup"] = {{"flagged", traj.blowup.flagged},
                       {"t", traj.blowup.t},
                       {"sup", traj.blowup.sup},
                       {"reason", traj.blowup.reason},
                       {"location", traj.blowup.location}};

  const auto csv = dir / "diagnostics.csv";
  manifest::write_series_csv(csv, series);
  scope.add(csv);
  for (std::size_t I = 0; I < traj.final.current.size(); ++I) {
    const auto bin = dir / ("u" + std::to_string(I + 1) + "_final.bin");
    fields::write_field(traj.final.current[I], bin);
    scope.add(bin);
    if (cfg.diagnostics.csv_slice) {
      const auto slice = dir / ("u" + std::to_string(I + 1) + "_slice.csv");
      fields::write_csv_slice(traj.final.current[I], 1, slice);
      scope.add(slice);
    }
  }
  const auto sum = dir / "summary.json";
  manifest::write_json(sum, summary);
  scope.add(sum);
  scope.m.criteria["completed"] = !traj.blowup.flagged;

  if (traj.blowup.flagged) {
    std::cout << "blow-up at t = " << manifest::format_double(traj.blowup.t) << " (" << traj.blowup.reason << ")\n";
    return scope.close(kBlowup);
  }
  std::cout << "reached t = " << manifest::format_double(traj.t_end) << " in " << traj.steps << " steps\n";
  return scope.close(kPass);
}

int cmd_verify(const Options& o) {
  const auto& names = suites::suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    throw suites::UnknownSuite("unknown suite '" + o.suite + "'");
  }
  suites::SuiteOptions so;
  if (!o.config.empty()) so.config = o.config;
  so.h = o.h;
  so.T = o.T;
  ManifestScope scope("verify " + o.suite, o.out);
  const auto matrix_text = read_file(so.config ? *so.config
                                               : so.fixture_dir / "suites" / (o.suite + ".json"));
  const auto result = suites::run_suite(o.suite, so);
  scope.m.config_hash = manifest::fnv1a_hex(matrix_text);
  scope.m.content_id = manifest::git_blob_id(matrix_text);
  for (const auto& c : result.checks) scope.m.criteria[c.id] = c.pass;
  const auto path = fs::path(o.out) / (o.suite + "_report.json");
  manifest::write_json(path, result.report);
  scope.add(path);
  for (const auto& c : result.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "\n";
  std::cout << o.suite << ": " << (result.pass ? "pass" : "fail") << "\n";
  return scope.close(result.pass ? kPass : kFail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullcone: null-form wave system experiments"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "input JSON");
    if (config_required) c->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker count (default: NULLCONE_THREADS or 1)");
    sub->add_option("--h", o.h, "grid spacing override");
    sub->add_option("--T", o.T, "final time override");
  };
  auto* check = app.add_subcommand("check-null", "check the null condition of a coefficient file");
  common(check, false);
  check->add_option("file", o.config, "coefficient file (alternative to --config)");
  check->add_option("--samples", o.samples, "cone directions per tuple");
  auto* sim = app.add_subcommand("simulate", "run a scenario");
  common(sim, true);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("suite", o.suite, "suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  init_worker_count_from_env();
  if (o.threads) {
    if (*o.threads < 1) {
      std::cerr << "error: --threads must be positive\n";
      return kUsage;
    }
    set_worker_count(*o.threads);
  }

  try {
    if (check->parsed()) {
      if (o.config.empty()) {
        std::cerr << "error: check-null needs a coefficient file\n";
        return kUsage;
      }
      return cmd_check_null(o);
    }
    if (sim->parsed()) return cmd_simulate(o);
    return cmd_verify(o);
  } catch (const suites::UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const nullform::CoefficientParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const scenario::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const fields::CflError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const exterior::SupportError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const solver::MemoryBudgetError& e) {
    std::cerr << "error: " << e.what() << " (largest feasible T " << e.feasible_T() << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
