// fit, manifest, parallel, profiles, reference
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nullcone/fit.hpp"
#include "nullcone/manifest.hpp"
#include "nullcone/parallel.hpp"
#include "nullcone/profiles.hpp"
#include "nullcone/reference.hpp"
#include "oracles.hpp"

using namespace nullcone;

TEST_CASE("growth fit recovers a power law") {
  fit::Series s;
  for (double t = 0; t <= 10; t += 0.5) s.emplace_back(t, 3.0 * std::pow(1 + t, 0.25));
  const auto g = fit::fit_growth(s);
  CHECK(g.exponent == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(std::exp(g.log_coefficient) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(g.residual < 1e-12);
  CHECK_THROWS(fit::fit_growth(fit::Series{{0, 1}, {1, 1}}));
  CHECK_THROWS(fit::fit_growth(fit::Series{{0, 1}, {1, 1}, {2, -1}, {3, 1}, {4, 1}}));
}

TEST_CASE("decay fit") {
  fit::Series s;
  for (double t = 0; t <= 20; t += 0.25) s.emplace_back(t, 2.0 * std::exp(-0.7 * t));
  const auto d = fit::fit_decay(s, 5, 15);
  CHECK_FALSE(d.exited_exactly);
  CHECK(d.rate == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(d.prefactor == doctest::Approx(2.0).epsilon(1e-9));
  s.back().second = 0.0;
  CHECK(fit::fit_decay(s, 5, 20).exited_exactly);
}

TEST_CASE("order fit") {
  CHECK(fit::fit_order({0.2, 0.1, 0.05}, {0.04, 0.01, 0.0025}) == doctest::Approx(2.0));
  CHECK(fit::fit_order({0.2, 0.1}, {0.3, 0.15}) == doctest::Approx(1.0));
}

TEST_CASE("hashes against published vectors") {
  CHECK(manifest::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(manifest::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(manifest::git_blob_id("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(manifest::git_blob_id("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("shortest round-trip doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5, -7.0, 6.02214076e23}) {
    const auto s = manifest::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(manifest::format_double(0.1) == "0.1");
}

TEST_CASE("json output is sorted and newline terminated") {
  const auto p = std::filesystem::temp_directory_path() / "nullcone_manifest_test.json";
  manifest::write_json(p, {{"b", 1}, {"a", {{"d", 2}, {"c", 3}}}});
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto text = ss.str();
  CHECK(text.back() == '\n');
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"c\"") < text.find("\"d\""));
  std::filesystem::remove(p);
}

TEST_CASE("series csv") {
  const auto p = std::filesystem::temp_directory_path() / "nullcone_series.csv";
  manifest::write_series_csv(p, {{"energy", {{0.0, 1.5}, {0.5, 1.25}}}});
  std::ifstream in(p);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  // RFC 4180 line ends
  CHECK(header.back() == '\r');
  header.pop_back();
  row.pop_back();
  CHECK(header == "t,quantity,value");
  CHECK(row == "0,energy,1.5");
  std::filesystem::remove(p);
}

TEST_CASE("deterministic reductions are independent of the worker count") {
  const std::size_t n = 1'000'003;
  auto partial = [](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += std::sin(0.001 * static_cast<double>(i)) / (1.0 + static_cast<double>(i));
    return s;
  };
  std::vector<double> sums, maxes;
  for (int w : {1, 2, 3, 8}) {
    set_worker_count(w);
    sums.push_back(deterministic_sum(n, partial));
    maxes.push_back(deterministic_max(n, partial));
  }
  set_worker_count(1);
  for (double s : sums) CHECK(s == sums.front());
  for (double m : maxes) CHECK(m == maxes.front());
}

TEST_CASE("parallel_for visits every index once") {
  set_worker_count(4);
  std::vector<int> hits(50'000, 0);
  parallel_for(hits.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ++hits[i];
  }, 333);
  set_worker_count(1);
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("profiles") {
  CHECK(profiles::bump(0.0) == 1.0);
  CHECK(profiles::bump(1.0) == 0.0);
  CHECK(profiles::bump(-1.2) == 0.0);
  const auto g = profiles::Profile::gaussian(2.0, 1.5);
  CHECK(g({1.0, 0.0, 0.0}) == doctest::Approx(2.0 * std::exp(-1.0 / 2.25)));
  CHECK(g({g.support_radius(), 0, 0}) <= 2.0 * 1e-16 * 1.0001);
  const auto sh = profiles::Profile::shell(1.0, 2.5, 0.5, 0.3);
  CHECK(sh({2.0, 0, 0}) == 0.0);
  CHECK(sh.inner_radius() == doctest::Approx(2.0));
  CHECK(sh({2.5, 0, 0}) == doctest::Approx(1.3));
  CHECK(sh({0, 2.5, 0}) == doctest::Approx(0.7));
  CHECK_FALSE(sh.is_radial());
  const auto back = profiles::profile_from_json(profiles::to_json(sh));
  CHECK(back.center == sh.center);
  CHECK(back.anisotropy == sh.anisotropy);
  CHECK_THROWS(profiles::profile_from_json({{"kind", "nope"}}));
}

TEST_CASE("forcing is supported in its slab") {
  const auto F = profiles::Forcing::spacetime_bump(2.0, 1.0, 2.0, 1.0);
  CHECK(F(0.5, {0, 0, 0}) == 0.0);
  CHECK(F(1.5, {0, 0, 0}) == doctest::Approx(2.0));
  CHECK(F(1.5, {1.1, 0, 0}) == 0.0);
}

TEST_CASE("closed-form references agree with independent formulas") {
  const reference::GaussianData d{1.0, 0.0, 1.0};
  for (double t : {0.0, 0.5, 2.0}) {
    for (double r : {0.0, 0.3, 1.0, 2.5}) {
      CHECK(reference::reference_spherical_3d(d, 1.0, t, r) ==
            doctest::Approx(oracle::spherical_gaussian(1.0, 1.0, 1.0, t, r)).epsilon(1e-8));
      CHECK(reference::reference_dalembert_1d(d, 2.0, t, r) ==
            doctest::Approx(oracle::dalembert_gaussian(1.0, 1.0, 2.0, t, r)).epsilon(1e-14));
    }
  }
  // u(2, 0) for the 1D Gaussian: e^{-4}
  CHECK(reference::reference_dalembert_1d(d, 1.0, 2.0, 0.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
}

TEST_CASE("spherical reference with velocity solves the wave equation") {
  const reference::GaussianData d{0.5, 0.8, 1.2};
  const double c = 1.5, e = 1e-3;
  for (double t : {0.7, 1.9}) {
    for (double r : {0.8, 2.0, 3.1}) {
      auto u = [&](double tt, double rr) { return reference::reference_spherical_3d(d, c, tt, rr); };
      const double utt = (u(t + e, r) - 2 * u(t, r) + u(t - e, r)) / (e * e);
      const double urr = (u(t, r + e) - 2 * u(t, r) + u(t, r - e)) / (e * e);
      const double ur = (u(t, r + e) - u(t, r - e)) / (2 * e);
      CHECK(std::abs(utt - c * c * (urr + 2 * ur / r)) < 1e-4);
    }
  }
  // initial velocity
  const double ut0 = (reference::reference_spherical_3d(d, c, e, 1.0) - reference::reference_spherical_3d(d, c, -e, 1.0)) / (2 * e);
  CHECK(ut0 == doctest::Approx(0.8 * std::exp(-1.0 / 1.44)).epsilon(1e-5));
}
