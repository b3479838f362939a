#include <cmath>
#include <limits>

#include "doctest.h"
#include "nullcone/parallel.hpp"
#include "nullcone/reference.hpp"
#include "nullcone/solver.hpp"
#include "oracles.hpp"

using namespace nullcone;
using fields::Grid;
using fields::Point;
using fields::ScalarField;

TEST_CASE("time step lands on integer times inside the cfl bound") {
  for (double h : {0.3, 0.2, 0.125, 0.05}) {
    for (double c : {1.0, 2.0}) {
      for (double cfl : {0.4, 0.5, 0.9}) {
        const double dt = solver::choose_dt(h, c, cfl);
        CHECK(c * dt / h <= cfl + 1e-15);
        const double steps = 1.0 / dt;
        CHECK(std::abs(steps - std::round(steps)) < 1e-9);
        CHECK(dt > 0.5 * cfl * h / c);
      }
    }
  }
}

TEST_CASE("causal extent and node budget") {
  const double R = solver::causal_extent(3.0, 2.0, 4.0, 0.25);
  CHECK(R == doctest::Approx(3.0 + 8.0 + 0.5));
  CHECK(std::fmod(R, 0.25) == doctest::Approx(0.0));
  try {
    solver::causal_extent(3.0, 1.0, 100.0, 0.05, 3, fields::Symmetry::full, 5'000'000);
    FAIL("expected MemoryBudgetError");
  } catch (const solver::MemoryBudgetError& e) {
    CHECK(e.feasible_T() > 0.0);
    CHECK(e.feasible_T() < 100.0);
    CHECK_NOTHROW(solver::causal_extent(3.0, 1.0, e.feasible_T(), 0.05, 3, fields::Symmetry::full, 5'000'000));
  }
}

TEST_CASE("reflection invariance of coefficient sets") {
  auto cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  cs.b({0, 0, 0}, {0, 0}) = 1.0;
  CHECK(solver::reflection_invariant(cs));
  cs.b({0, 0, 0}, {1, 1}) = -1.0;
  CHECK(solver::reflection_invariant(cs));
  cs.b({0, 0, 0}, {0, 2}) = 0.5;
  CHECK_FALSE(solver::reflection_invariant(cs));
}

TEST_CASE("1D free wave converges at second order to d'Alembert") {
  const auto cs = nullform::CoefficientSet::zeros(1, nullform::SpeedVector({1.0}));
  std::vector<double> hs{0.1, 0.05, 0.025}, errs;
  for (double h : hs) {
    solver::SimulationSetup s;
    s.cs = cs;
    const double dt = solver::choose_dt(h, 1.0, 0.5);
    s.grid = Grid(1, h, solver::causal_extent(6.0, 1.0, 2.0, h, 1), dt);
    s.f = {profiles::Profile::gaussian(1.0, 1.0)};
    s.g = {profiles::Profile::zero()};
    s.T = 2.0;
    const auto tr = solver::simulate(s);
    CHECK(tr.t_end == doctest::Approx(2.0));
    const auto& u = tr.final.current[0];
    double e = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      e = std::max(e, std::abs(u[i] - oracle::dalembert_gaussian(1.0, 1.0, 1.0, 2.0, s.grid.position(i)[0])));
    errs.push_back(e);
  }
  CHECK(oracle::slope(hs, errs) >= 1.9);
}

TEST_CASE("octant and full grids agree on even data") {
  auto cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  cs.b({0, 0, 0}, {0, 0}) = 1.0;
  cs.b({0, 0, 0}, {1, 1}) = -1.0;
  cs.b({0, 0, 0}, {2, 2}) = -1.0;
  cs.b({0, 0, 0}, {3, 3}) = -1.0;
  auto run = [&](fields::Symmetry sym) {
    solver::SimulationSetup s;
    s.cs = cs;
    const double h = 0.25;
    s.grid = Grid(3, h, 4.0, solver::choose_dt(h, 1.0, 0.5), sym);
    s.f = {profiles::Profile::bump(0.3, 1.5)};
    s.g = {profiles::Profile::zero()};
    s.T = 1.0;
    return solver::simulate(s);
  };
  const auto full = run(fields::Symmetry::full);
  const auto oct = run(fields::Symmetry::octant);
  const auto& uf = full.final.current[0];
  const auto& uo = oct.final.current[0];
  double diff = 0;
  for (std::size_t i = 0; i < uo.size(); ++i) {
    const auto p = uo.grid().position(i);
    const int N = uf.grid().half_count();
    const auto a = uo.grid().unravel(i);
    const std::size_t j = static_cast<std::size_t>(a[0] + N) * uf.grid().stride(1) +
                          static_cast<std::size_t>(a[1] + N) * uf.grid().stride(2) + static_cast<std::size_t>(a[2] + N);
    CHECK(uf.grid().position(j) == p);
    diff = std::max(diff, std::abs(uo[i] - uf[j]));
  }
  CHECK(diff < 1e-13);
}

TEST_CASE("pinned nodes stay zero") {
  const auto cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  solver::SimulationSetup s;
  s.cs = cs;
  s.grid = Grid(3, 0.25, 5.0, solver::choose_dt(0.25, 1.0, 0.5), fields::Symmetry::octant);
  s.f = {profiles::Profile::shell(1.0, 2.5, 0.5)};
  s.g = {profiles::Profile::zero()};
  s.options.pin_radius = 1.0;
  s.T = 2.0;
  const auto tr = solver::simulate(s);
  const auto& u = tr.final.current[0];
  double inside = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (s.grid.radius(i) <= 1.0) inside = std::max(inside, std::abs(u[i]));
  CHECK(inside == 0.0);
  CHECK(u.max_abs() > 0.0);
}

TEST_CASE("blow-up detection") {
  Grid g(1, 0.5, 2.0, 0.25);
  fields::Frame fr;
  fr.previous = {ScalarField(g, 0.0)};
  fr.current = {ScalarField(g, 0.25)};
  fr.t = 0.25;
  fr.dt = 0.25;
  CHECK_FALSE(solver::detect_blowup(fr, 1.0).flagged);
  fr.current[0][3] = 10.0;
  const auto b = solver::detect_blowup(fr, 1.0);
  CHECK(b.flagged);
  CHECK(b.sup > 1.0);
  fr.current[0][3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(solver::detect_blowup(fr, 1e300).flagged);
}

TEST_CASE("(d_t u)^2 with large data blows up, small data does not") {
  auto cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  cs.b({0, 0, 0}, {0, 0}) = 1.0;
  auto run = [&](double A) {
    solver::SimulationSetup s;
    s.cs = cs;
    const double h = 0.25;
    s.grid = Grid(3, h, solver::causal_extent(2.0, 1.0, 3.0, h, 3, fields::Symmetry::octant),
                  solver::choose_dt(h, 1.0, 0.4), fields::Symmetry::octant);
    s.f = {profiles::Profile::zero()};
    s.g = {profiles::Profile::bump(A, 2.0)};
    s.T = 3.0;
    return solver::simulate(s);
  };
  CHECK(run(3.0).blowup.flagged);
  CHECK_FALSE(run(0.01).blowup.flagged);
}

TEST_CASE("solver results do not depend on the worker count") {
  auto cs = nullform::CoefficientSet::zeros(2, nullform::SpeedVector({1.0}));
  cs.b({0, 0, 0}, {0, 1}) = 0.5;
  cs.b({0, 0, 0}, {1, 0}) = 0.5;
  auto run = [&] {
    solver::SimulationSetup s;
    s.cs = cs;
    s.grid = Grid(2, 0.05, 5.0, solver::choose_dt(0.05, 1.0, 0.5));
    s.f = {profiles::Profile::gaussian(0.2, 1.0)};
    s.g = {profiles::Profile::zero()};
    s.T = 1.0;
    return solver::simulate(s).final.current[0].values();
  };
  set_worker_count(1);
  const auto a = run();
  set_worker_count(4);
  const auto b = run();
  set_worker_count(1);
  CHECK(a == b);
}
