#include <cmath>

#include "doctest.h"
#include "nullcone/exterior.hpp"
#include "nullcone/reference.hpp"
#include "oracles.hpp"

using namespace nullcone;

namespace {

// Half-line oracle written out directly: v = r u, odd extension about rho.
double half_line(double center, double width, double rho, double t, double r) {
  auto f = [&](double s) { return profiles::bump((s - center) / width); };
  auto v0 = [&](double s) { return s >= rho ? s * f(s) : -(2 * rho - s) * f(2 * rho - s); };
  return 0.5 * (v0(r - t) + v0(r + t)) / r;
}

}  // namespace

TEST_CASE("obstacle radius range") {
  CHECK_NOTHROW(exterior::ObstacleSpec{0.0}.validate());
  CHECK_NOTHROW(exterior::ObstacleSpec{1.0}.validate());
  CHECK_THROWS(exterior::ObstacleSpec{-0.1}.validate());
  CHECK_THROWS(exterior::ObstacleSpec{1.5}.validate());
  CHECK(exterior::ObstacleSpec{0.0}.empty());
}

TEST_CASE("radial grid") {
  exterior::RadialGrid g(1.0, 5.0, 0.01, 0.005);
  CHECK(g.size() == 401);
  CHECK(g.r(400) == doctest::Approx(5.0));
  CHECK_THROWS(exterior::RadialGrid(2.0, 1.0, 0.1, 0.05));
}

TEST_CASE("reference exterior solution matches the odd reflection") {
  auto f = [](double r) { return profiles::bump((r - 2.5) / 0.5); };
  auto g = [](double) { return 0.0; };
  for (double t : {0.0, 0.7, 1.6, 2.4}) {
    for (double r : {1.0, 1.3, 2.0, 2.9, 3.7}) {
      CHECK(reference::reference_radial_exterior(f, g, 1.0, 1.0, t, r) ==
            doctest::Approx(half_line(2.5, 0.5, 1.0, t, r)).epsilon(1e-10));
    }
  }
  CHECK(reference::reference_radial_exterior(f, g, 1.0, 1.0, 1.9, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("radial solver converges to the half-line oracle") {
  // width 1: narrower shells are still pre-asymptotic at these h
  const auto f = profiles::Profile::shell(1.0, 3.0, 1.0);
  std::vector<double> hs{0.02, 0.01, 0.005}, errs;
  for (double h : hs) {
    exterior::RadialGrid grid(1.0, 8.0, h, h / 2);
    const auto tr = exterior::simulate_radial_exterior(f, profiles::Profile::zero(), 1.0, 2.0, grid);
    double e = 0;
    for (std::size_t i = 0; i < tr.r.size(); ++i) e = std::max(e, std::abs(tr.u[i] - half_line(3.0, 1.0, 1.0, tr.t_end, tr.r[i])));
    errs.push_back(e);
  }
  CHECK(oracle::slope(hs, errs) > 1.4);
  CHECK(errs.back() < 2e-3);
}

TEST_CASE("radial discrete energy is conserved") {
  const auto f = profiles::Profile::shell(1.0, 2.5, 0.5);
  exterior::RadialGrid grid(1.0, 20.0, 0.02, 0.01);
  const auto tr = exterior::simulate_radial_exterior(f, profiles::Profile::zero(), 1.0, 6.0, grid);
  const double E0 = tr.total_energy.front().second;
  for (const auto& [t, E] : tr.total_energy) CHECK(std::abs(E - E0) <= 1e-10 * E0);
}

TEST_CASE("data touching the obstacle is rejected") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  s.grid = fields::Grid(3, 0.25, 6.0, 0.125, fields::Symmetry::octant);
  s.f = {profiles::Profile::gaussian(1.0, 1.0)};
  s.g = {profiles::Profile::zero()};
  s.T = 1.0;
  CHECK_THROWS_AS(exterior::simulate_masked_exterior(s, exterior::ObstacleSpec{1.0}), exterior::SupportError);
}

TEST_CASE("masked run with an empty obstacle equals the free solver") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  s.grid = fields::Grid(3, 0.25, 6.0, 0.125, fields::Symmetry::octant);
  s.f = {profiles::Profile::shell(1.0, 2.5, 0.5)};
  s.g = {profiles::Profile::zero()};
  s.T = 1.5;
  const auto masked = exterior::simulate_masked_exterior(s, exterior::ObstacleSpec{0.0});
  const auto free = solver::simulate(s);
  const auto& a = masked.trajectory.final.current[0].values();
  const auto& b = free.final.current[0].values();
  REQUIRE(a.size() == b.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  CHECK(d <= 1e-12);
}

TEST_CASE("masked local energy decays once the shell has left") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  const double h = 0.2;
  s.grid = fields::Grid(3, h, 3.0 + 9.0 + 0.6, 0.1, fields::Symmetry::octant);
  s.f = {profiles::Profile::shell(1.0, 2.5, 0.5)};
  s.g = {profiles::Profile::zero()};
  s.T = 9.0;
  const auto run = exterior::simulate_masked_exterior(s, exterior::ObstacleSpec{1.0}, 4.0);
  const double E0 = run.local_energy.front().second;
  CHECK(E0 > 0.0);
  CHECK(run.local_energy.back().second < 0.05 * E0);
  CHECK(run.collar_lipschitz <= 4.0);
}
