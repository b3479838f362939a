#include <cmath>

#include "doctest.h"
#include "nullcone/derivatives.hpp"
#include "nullcone/energy.hpp"
#include "nullcone/solver.hpp"
#include "oracles.hpp"

using namespace nullcone;
using fields::Grid;
using fields::Point;
using fields::ScalarField;

namespace {

std::vector<ScalarField> one(ScalarField f) { return {std::move(f)}; }

}  // namespace

TEST_CASE("linear density: e0 = u_t^2 + c^2 |grad u|^2, e_k = -2 c^2 u_t d_k u") {
  Grid g(2, 0.5, 1.0, 0.1);
  energy::Gradients grads(1);
  grads[0].push_back(ScalarField::sample(g, 0, [](const Point&) { return 2.0; }));
  grads[0].push_back(ScalarField::sample(g, 0, [](const Point&) { return 1.0; }));
  grads[0].push_back(ScalarField::sample(g, 0, [](const Point&) { return -3.0; }));
  const auto e = energy::energy_density(grads, energy::GammaField(), nullform::SpeedVector({2.0}));
  CHECK(e.positive);
  CHECK(e.e[0][0] == doctest::Approx(4.0 + 4.0 * 10.0));
  CHECK(e.e[1][0] == doctest::Approx(-2 * 4 * 2.0 * 1.0));
  CHECK(e.e[2][0] == doctest::Approx(-2 * 4 * 2.0 * -3.0));
}

TEST_CASE("gaussian initial energy is (pi/2)^(3/2)") {
  // u = 0, u_t = exp(-r^2): int e_0 = int exp(-2 r^2) = (pi/2)^{3/2}
  Grid g(3, 0.1, 5.0, 0.05, fields::Symmetry::octant);
  auto ut = ScalarField::sample(g, 0, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
  ScalarField u(g);
  energy::Gradients grads{energy::level_gradient(u, ut)};
  const auto e = energy::energy_density(grads, energy::GammaField(), nullform::SpeedVector({1.0}));
  const double E = e.e[0].integral();
  CHECK(E == doctest::Approx(std::pow(std::numbers::pi / 2, 1.5)).epsilon(0.01));
}

TEST_CASE("discrete energy is conserved by the free scheme") {
  const nullform::CoefficientSet cs = nullform::CoefficientSet::zeros(2, nullform::SpeedVector({1.5}));
  const double h = 0.1;
  const double dt = solver::choose_dt(h, 1.5, 0.5);
  Grid g(2, h, 5.0, dt);
  solver::LeapfrogSolver s(cs, g);
  s.initialize(one(ScalarField::sample(g, 0, [](const Point& x) { return std::exp(-2 * (x[0] * x[0] + x[1] * x[1])); })),
               one(ScalarField(g)));
  s.step();
  const double E0 = energy::discrete_energy(s.frame(), cs.speeds);
  double drift = 0;
  for (int k = 0; k < 100; ++k) {
    s.step();
    drift = std::max(drift, std::abs(energy::discrete_energy(s.frame(), cs.speeds) - E0) / E0);
  }
  CHECK(drift < 1e-12);
}

TEST_CASE("gamma smallness threshold is c_min^2 / 4") {
  auto cs = nullform::CoefficientSet::zeros(1, nullform::SpeedVector({1.0}));
  cs.q({0, 0, 0}, {0, 0, 0}) = 1.0;
  const nullform::NonlinearityKernel kernel(cs);
  Grid g(1, 0.5, 1.0, 0.1);
  for (double ut : {0.2, 0.3}) {
    energy::Gradients grads(1);
    grads[0].push_back(ScalarField::sample(g, 0, [ut](const Point&) { return ut; }));
    grads[0].push_back(ScalarField(g));
    const auto gamma = energy::assemble_gamma(kernel, grads);
    CHECK(gamma.max_abs() == doctest::Approx(ut));
    CHECK(energy::gamma_small(gamma, cs.speeds) == (ut < 0.25));
  }
}

TEST_CASE("divergence residual of an exact solution shrinks at second order") {
  const auto cs = nullform::CoefficientSet::zeros(1, nullform::SpeedVector({1.0}));
  std::vector<double> hs{0.1, 0.05}, res;
  for (double h : hs) {
    const double dt = h / 2;
    Grid g(1, h, 4.0, dt);
    auto lvl = [&](double t) {
      return one(ScalarField::sample(g, t, [t](const Point& x) { return oracle::dalembert_gaussian(1.0, 1.0, 1.0, t, x[0]); }));
    };
    const double t = 1.0;
    res.push_back(energy::divergence_residual(lvl(t - dt), lvl(t), lvl(t + dt), dt, cs, nullptr,
                                              static_cast<int>(std::lround(0.6 / h)))
                      .residual);
  }
  CHECK(oracle::slope(hs, res) > 1.9);
}

TEST_CASE("static field has no residual") {
  const auto cs = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0}));
  Grid g(3, 0.25, 1.5, 0.1);
  auto c = one(ScalarField::sample(g, 0, [](const Point&) { return 0.7; }));
  CHECK(energy::divergence_residual(c, c, c, 0.1, cs).residual <= 1e-12);
}
