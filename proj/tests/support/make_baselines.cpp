// Regenerates fixtures/baselines from independent sources:
//   ks_oracle.json  pointwise ratio evaluated on the closed-form spherical wave
//   kss.json        frozen weighted norms of the kss suite case (regression)
// Usage: make_baselines [fixture_dir]

#include <algorithm>
#include <iostream>

#include "nullcone/manifest.hpp"
#include "nullcone/reference.hpp"
#include "nullcone/scenario.hpp"
#include "nullcone/suites.hpp"
#include "nullcone/weighted.hpp"

using namespace nullcone;
using nlohmann::json;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : NULLCONE_FIXTURE_DIR;
  const auto suites_dir = dir / "suites";

  {
    const json m = suites::load_fixture(dir, "suites/ks.json");
    auto cfg = scenario::load_config(suites_dir / m.at("case").at("scenario").get<std::string>());
    auto times = m.value("times", std::vector<double>{1.0, 2.0, 4.0, 8.0});
    std::sort(times.begin(), times.end());
    const int w = m.value("half_width", 4);
    const double dt0 = solver::choose_dt(cfg.grid.h, cfg.cs.speeds.max(), cfg.grid.cfl);
    cfg.T = times.back() + (w + 1) * dt0;
    const auto setup = scenario::build_setup(cfg);
    const auto& f = cfg.f.front();
    const auto& g = cfg.g.front();
    if (f.kind != profiles::Profile::Kind::gaussian || (!g.is_zero() && g.kind != profiles::Profile::Kind::gaussian)) {
      std::cerr << "ks case must use Gaussian data\n";
      return 1;
    }
    const reference::GaussianData data{f.amplitude, g.is_zero() ? 0.0 : g.amplitude, f.sigma};
    const double c = cfg.cs.speeds[0];
    json samples = json::array();
    for (double t : times) {
      // same time levels the solver produces: integer multiples of dt
      const double tc = std::round(t / setup.grid.dt()) * setup.grid.dt();
      const auto block = fields::SpaceTimeBlock::sample(
          setup.grid, tc, w, setup.grid.dt(),
          [&](double tt, const fields::Point& x) {
            return reference::reference_spherical_3d(data, c, tt, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
          });
      auto s = weighted::ks_pointwise_sample(block, c);
      s.t = t;
      samples.push_back(weighted::to_json(s));
    }
    manifest::write_json(dir / "baselines" / "ks_oracle.json",
                         {{"source", "closed-form spherical wave sampled on the suite grid"},
                          {"h", cfg.grid.h},
                          {"samples", samples}});
  }

  {
    const json m = suites::load_fixture(dir, "suites/kss.json");
    const auto cfg = scenario::load_config(suites_dir / m.at("case").at("scenario").get<std::string>());
    const auto norms = weighted::weighted_norms(scenario::build_setup(cfg));
    manifest::write_json(dir / "baselines" / "kss.json", {{"source", "frozen run of the kss suite case"},
                                                          {"h", cfg.grid.h},
                                                          {"T", cfg.T},
                                                          {"kss_norm", norms.kss_norm},
                                                          {"lr_norm", norms.lr_norm}});
  }
  std::cout << "baselines written to " << (dir / "baselines").string() << "\n";
  return 0;
}
