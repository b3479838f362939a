#include <cmath>

#include "doctest.h"
#include "nullcone/weighted.hpp"
#include "oracles.hpp"

using namespace nullcone;
using fields::Grid;
using fields::Point;

TEST_CASE("tangential derivatives at a node") {
  const Point x{0.6, 0.8, 0.0};
  const double grad[3] = {0.6, 0.8, 0.0};  // radial unit gradient, u_r = 1
  const auto t = weighted::tangential_at(3, x, 1.0, 0.1, 2.0, -2.0, grad);
  CHECK_FALSE(t.masked);
  CHECK(t.d0 == doctest::Approx(0.0));
  CHECK(t.angular2 == doctest::Approx(0.0));
  const auto m = weighted::tangential_at(3, {0.05, 0, 0}, 0.05, 0.1, 1.0, 0.0, grad);
  CHECK(m.masked);
  const double g1[1] = {1.0};
  CHECK(weighted::tangential_at(1, {0, 0, 0}, 0.0, 0.1, 1.0, 0.0, g1).masked);
  CHECK(weighted::tangential_at(1, {0.5, 0, 0}, 0.5, 0.1, 1.0, -1.0, g1).d0 == doctest::Approx(0.0));
}

TEST_CASE("zero field gives ratio 0") {
  Grid g(3, 0.5, 3.0, 0.25, fields::Symmetry::octant);
  const auto blk = fields::SpaceTimeBlock::sample(g, 1.0, 4, 0.25, [](double, const Point&) { return 0.0; });
  const auto s = weighted::ks_pointwise_sample(blk, 1.0);
  CHECK(s.lhs == 0.0);
  CHECK(s.ratio == 0.0);
}

TEST_CASE("ks ratio is homogeneous of degree zero") {
  Grid g(3, 0.25, 5.0, 0.125, fields::Symmetry::octant);
  auto fn = [](double t, const Point& x) {
    return oracle::spherical_gaussian(1.0, 1.0, 1.0, t, std::hypot(x[0], x[1], x[2]));
  };
  const auto a = weighted::ks_pointwise_sample(fields::SpaceTimeBlock::sample(g, 1.0, 4, 0.125, fn), 1.0);
  const auto b = weighted::ks_pointwise_sample(
      fields::SpaceTimeBlock::sample(g, 1.0, 4, 0.125, [&](double t, const Point& x) { return 3.0 * fn(t, x); }), 1.0);
  CHECK(a.ratio > 0.0);
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
  CHECK(b.lhs == doctest::Approx(3.0 * a.lhs).epsilon(1e-12));
}

TEST_CASE("weighted inequality holds on a forced 1D run") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(1, nullform::SpeedVector({1.0}));
  const double h = 0.02;
  s.grid = Grid(1, h, solver::causal_extent(1.0, 1.0, 4.0, h, 1), solver::choose_dt(h, 1.0, 0.5));
  s.f = {profiles::Profile::bump(1.0, 1.0)};
  s.g = {profiles::Profile::zero()};
  s.options.forcing = {profiles::Forcing::spacetime_bump(1.0, 1.0, 2.0, 1.0)};
  s.T = 4.0;
  const auto rep = weighted::lemma_we_report(s);
  CHECK(rep.we.holds);
  CHECK(rep.we.ratio <= 1.02);
  CHECK(rep.we.ratio > 0.5);
  CHECK(rep.we.kappa_term.size() == weighted::kKappaGrid.size());
}

TEST_CASE("lemma report rejects nonlinear input") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(1, nullform::SpeedVector({1.0}));
  s.cs.b({0, 0, 0}, {0, 0}) = 1.0;
  s.grid = Grid(1, 0.1, 3.0, 0.05);
  s.f = {profiles::Profile::zero()};
  s.g = {profiles::Profile::zero()};
  s.T = 1.0;
  CHECK_THROWS_AS(weighted::lemma_we_report(s), std::invalid_argument);
}

TEST_CASE("weighted norms are homogeneous and cumulative integrals grow") {
  solver::SimulationSetup s;
  s.cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  s.grid = Grid(3, 0.25, solver::causal_extent(1.5, 1.0, 2.0, 0.25, 3, fields::Symmetry::octant), 0.125,
                fields::Symmetry::octant);
  s.f = {profiles::Profile::bump(1.0, 1.5)};
  s.g = {profiles::Profile::zero()};
  s.T = 2.0;
  const auto a = weighted::weighted_norms(s);
  s.f = {profiles::Profile::bump(2.0, 1.5)};
  const auto b = weighted::weighted_norms(s);
  CHECK(b.kss_norm == doctest::Approx(2.0 * a.kss_norm).epsilon(1e-12));
  for (std::size_t i = 1; i < a.kss_cumulative.size(); ++i)
    CHECK(a.kss_cumulative[i].second >= a.kss_cumulative[i - 1].second);
}
