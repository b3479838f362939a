#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "nullcone/derivatives.hpp"
#include "nullcone/field_io.hpp"
#include "nullcone/vector_fields.hpp"
#include "oracles.hpp"

using namespace nullcone::fields;

TEST_CASE("grid layout") {
  Grid full(3, 0.5, 2.0, 0.1);
  CHECK(full.axis_nodes() == 9);
  CHECK(full.size() == 729);
  CHECK(full.coord(0) == -2.0);
  Grid oct(3, 0.5, 2.0, 0.1, Symmetry::octant);
  CHECK(oct.axis_nodes() == 5);
  CHECK(oct.coord(0) == 0.0);
  const auto idx = oct.stride(1) * 2 + oct.stride(2) * 1 + 3;
  const auto p = oct.position(idx);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 1.5);
  CHECK(oct.radius(idx) == doctest::Approx(std::sqrt(3.5)));
}

TEST_CASE("cfl check") {
  Grid g(1, 0.1, 1.0, 0.05);
  CHECK_NOTHROW(g.check_cfl(1.0, 0.5));
  CHECK_THROWS_AS(g.check_cfl(2.0, 0.9), CflError);
  CHECK_THROWS_AS(g.check_cfl(1.0, 1.2), CflError);
}

TEST_CASE("octant quadrature equals the full integral") {
  auto gauss = [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); };
  Grid full(3, 0.1, 6.0, 0.05), oct(3, 0.1, 6.0, 0.05, Symmetry::octant);
  const double a = ScalarField::sample(full, 0, gauss).integral();
  const double b = ScalarField::sample(oct, 0, gauss).integral();
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK(a == doctest::Approx(std::pow(std::numbers::pi, 1.5)).epsilon(1e-8));
}

TEST_CASE("quadratics are differentiated exactly, boundary rows included") {
  Grid g(2, 0.25, 2.0, 0.1);
  auto f = ScalarField::sample(g, 0, [](const Point& x) { return 3 * x[0] * x[0] - x[0] * x[1] + 2 * x[1]; });
  const auto dx = spatial_derivative(f, 1);
  const auto dxy = second_spatial_derivative(f, 1, 2);
  const auto lap = laplacian(f);
  double e1 = 0, e2 = 0, e3 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.position(i);
    e1 = std::max(e1, std::abs(dx[i] - (6 * p[0] - p[1])));
    e2 = std::max(e2, std::abs(dxy[i] + 1.0));
    e3 = std::max(e3, std::abs(lap[i] - 6.0));
  }
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);
  CHECK(e3 < 1e-11);
}

TEST_CASE("octant mirror follows parity") {
  Grid g(3, 0.2, 2.0, 0.1, Symmetry::octant);
  // x_1 * cos(x_2): odd in axis 1
  auto f = ScalarField::sample(g, 0, [](const Point& x) { return x[0] * std::cos(x[1]); }, {-1, 1, 1});
  const auto d1 = spatial_derivative(f, 1);
  const auto d2 = spatial_derivative(f, 2);
  CHECK(d1.parity() == Parity{1, 1, 1});
  CHECK(d2.parity() == Parity{-1, -1, 1});
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.position(i);
    if (p[0] > 1.5 || p[1] > 1.5) continue;
    err = std::max(err, std::abs(d1[i] - std::cos(p[1])));
  }
  CHECK(err < 0.01);
}

TEST_CASE("central differences converge at second order") {
  std::vector<double> hs{0.1, 0.05, 0.025}, errs;
  for (double h : hs) {
    Grid g(1, h, 3.0, h);
    auto f = ScalarField::sample(g, 0, [](const Point& x) { return std::sin(2 * x[0]); });
    const auto d = spatial_derivative(f, 1);
    double e = 0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(d[i] - 2 * std::cos(2 * g.position(i)[0])));
    errs.push_back(e);
  }
  CHECK(oracle::slope(hs, errs) > 1.9);
}

TEST_CASE("time derivatives in a block") {
  Grid g(1, 0.5, 1.0, 0.1);
  const auto blk = SpaceTimeBlock::sample(g, 1.0, 2, 0.1, [](double t, const Point& x) { return t * t + x[0]; });
  for (std::size_t k = 0; k < blk.levels(); ++k) {
    const auto d = time_derivative(blk, k);
    const auto dd = second_time_derivative(blk, k);
    CHECK(d[0] == doctest::Approx(2 * blk.time(k)).epsilon(1e-12));
    CHECK(dd[0] == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("box annihilates a travelling wave up to O(h^2)") {
  std::vector<double> hs{0.1, 0.05}, errs;
  for (double h : hs) {
    Grid g(1, h, 4.0, h / 2);
    const auto blk = SpaceTimeBlock::sample(g, 0.5, 2, h / 2, [](double t, const Point& x) {
      return std::exp(-(x[0] - 2 * t) * (x[0] - 2 * t));
    });
    const auto b = box(blk, 2, 2.0);
    errs.push_back(b.max_abs());
  }
  CHECK(oracle::slope(hs, errs) > 1.9);
}

TEST_CASE("z fields") {
  const auto z3 = z_fields(3);
  CHECK(z3.size() == 7);
  CHECK(z_fields(2).size() == 4);
  CHECK(z_fields(1).size() == 2);
}

TEST_CASE("cutoff is C2 and monotone") {
  CHECK(cutoff_chi(0.5) == 0.0);
  CHECK(cutoff_chi(1.0) == 0.0);
  CHECK(cutoff_chi(2.0) == 1.0);
  CHECK(cutoff_chi(1.5) == doctest::Approx(0.5));
  double prev = 0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    CHECK(cutoff_chi(r) >= prev - 1e-15);
    prev = cutoff_chi(r);
  }
  const double e = 1e-4;
  // one-sided second difference at both ends
  CHECK(std::abs(cutoff_chi(1 + 2 * e) - 2 * cutoff_chi(1 + e) + cutoff_chi(1.0)) / (e * e) < 1e-2);
  CHECK(std::abs(cutoff_chi(2.0) - 2 * cutoff_chi(2 - e) + cutoff_chi(2 - 2 * e)) / (e * e) < 1e-2);
}

TEST_CASE("rotation applied to a radial function vanishes") {
  Grid g(3, 0.2, 2.0, 0.1);
  auto f = ScalarField::sample(g, 0, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
  const auto w = apply_vector_field(VectorField::omega(1, 2), f);
  CHECK(w.max_abs() < 2e-2 * f.max_abs());
  CHECK_THROWS(apply_vector_field(VectorField::scaling(), f));
}

TEST_CASE("commutators: partials and rotations exact, scaling second order") {
  auto u = [](double t, const Point& x) {
    return std::exp(-0.5 * ((x[0] - 0.3) * (x[0] - 0.3) + x[1] * x[1] + (x[2] + 0.2) * (x[2] + 0.2))) * std::cos(t);
  };
  {
    Grid g(3, 0.2, 2.4, 0.1);
    CHECK(commutator_residual(CommutatorPair::box_z, VectorField::partial(2), u, g, 1.0, 1.0) < 1e-10);
  }
  std::vector<double> hs{0.2, 0.1}, rot, scal;
  for (double h : hs) {
    Grid g(3, h, 2.4, h / 2);
    // same physical margin at both resolutions
    const int margin = static_cast<int>(std::lround(0.8 / h));
    rot.push_back(commutator_residual(CommutatorPair::box_z, VectorField::omega(1, 3), u, g, 1.0, 1.0, margin));
    scal.push_back(commutator_residual(CommutatorPair::box_scaling, VectorField::scaling(), u, g, 1.0, 1.0, margin));
  }
  // central differences commute with x_j d_k - x_k d_j on a uniform grid
  for (double r : rot) CHECK(r < 1e-11);
  CHECK(oracle::slope(hs, scal) > 1.8);
}

TEST_CASE("tangential derivatives vanish on an outgoing profile") {
  // u = G(r - ct) with c = 2: d_t u + c d_r u = 0, angular part 0
  const double c = 2.0;
  Grid g(3, 0.25, 3.0, 0.1);
  auto G = [](double s) { return std::exp(-s * s); };
  auto dG = [](double s) { return -2 * s * std::exp(-s * s); };
  std::vector<ScalarField> grad;
  grad.push_back(ScalarField::sample(g, 0, [&](const Point& x) {
    const double r = std::hypot(x[0], x[1], x[2]);
    return -c * dG(r - 1.0);
  }));
  for (int j = 0; j < 3; ++j)
    grad.push_back(ScalarField::sample(g, 0, [&, j](const Point& x) {
      const double r = std::hypot(x[0], x[1], x[2]);
      return r > 0 ? dG(r - 1.0) * x[j] / r : 0.0;
    }));
  (void)G;
  const auto tf = tangential_derivatives(c, grad);
  for (const auto& comp : tf.components) CHECK(comp.max_abs() < 1e-12);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < g.size(); ++i) inside += g.radius(i) < tangential_mask_radius(g) ? 1 : 0;
  CHECK(tf.masked_nodes == inside);
}

TEST_CASE("weights") {
  WeightSpec x{WeightSpec::Kind::angle_x, 1.0};
  CHECK(weight_value(x, 0, 0) == 1.0);
  CHECK(weight_value(x, 0, 1) == doctest::Approx(std::sqrt(2.0)));
  WeightSpec cone{WeightSpec::Kind::cone, -1.0, 2.0, true};
  CHECK(weight_value(cone, 3.0, 1.0) == doctest::Approx(1.0 / 6.0));
  WeightSpec tr{WeightSpec::Kind::time_plus_r, 0.5};
  CHECK(weight_value(tr, 1.0, 2.0) == doctest::Approx(std::pow(10.0, 0.25)));
}

TEST_CASE("binary snapshot round trip") {
  Grid g(2, 0.5, 1.0, 0.1, Symmetry::octant);
  auto f = ScalarField::sample(g, 0.75, [](const Point& x) { return x[0] + 10 * x[1]; });
  const auto p = std::filesystem::temp_directory_path() / "nullcone_field_io.bin";
  write_field(f, p);
  const auto s = read_field(p);
  CHECK(s.dim == 2);
  CHECK(s.shape == std::vector<std::int64_t>{3, 3});
  CHECK(s.h == 0.5);
  CHECK(s.t == 0.75);
  CHECK(s.values == f.values());
  std::filesystem::remove(p);
}
