#include <random>

#include "doctest.h"
#include "nullcone/coefficients_io.hpp"
#include "nullcone/nullform.hpp"
#include "oracles.hpp"

using namespace nullcone::nullform;

namespace {

const char* kFixtures[] = {"intro_example", "scalar_null", "dtu_squared", "cubic_2d",
                           "cubic_2d_violation", "multi_speed_cross", "multi_speed_violation"};

CoefficientSet fixture(const std::string& name) {
  return load_coefficients(std::string(NULLCONE_FIXTURE_DIR) + "/coefficients/" + name + ".json");
}

}  // namespace

TEST_CASE("fixture verdicts agree with a 10x denser brute-force sampling") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto cs = fixture(name);
    const auto report = check_null(cs, 256);
    const auto brute = oracle::brute_null(cs, 2560, 7);
    int compared = 0;
    for (const auto& t : report.tuples) {
      if (t.verdict == Verdict::exempt) continue;
      auto it = brute.find(t.components);
      REQUIRE(it != brute.end());
      CHECK((t.verdict == Verdict::violated) == it->second.violated);
      if (t.verdict == Verdict::holds) CHECK(t.residual <= 1e-10);
      ++compared;
    }
    CHECK(compared == static_cast<int>(brute.size()));
  }
}

TEST_CASE("expected fixture outcomes") {
  CHECK(check_null(fixture("intro_example"), 256).holds());
  CHECK(check_null(fixture("scalar_null"), 256).holds());
  CHECK(check_null(fixture("cubic_2d"), 256).holds());
  CHECK(check_null(fixture("multi_speed_cross"), 256).holds());
  CHECK_FALSE(check_null(fixture("dtu_squared"), 256).holds());
  CHECK_FALSE(check_null(fixture("cubic_2d_violation"), 256).holds());
  CHECK_FALSE(check_null(fixture("multi_speed_violation"), 256).holds());
}

TEST_CASE("violation carries a unit witness on the cone") {
  const auto r = check_null(fixture("dtu_squared"), 128);
  REQUIRE(r.witness);
  const auto& xi = *r.witness;
  double s = 0.0;
  for (std::size_t i = 1; i < xi.size(); ++i) s += xi[i] * xi[i];
  CHECK(s == doctest::Approx(1.0));
  CHECK(std::abs(xi[0]) == doctest::Approx(1.0));
  // (d_t u)^2 on the cone is xi_0^2 = c^2
  CHECK(r.worst_residual == doctest::Approx(1.0));
}

TEST_CASE("mixed-speed tuples are exempt") {
  const auto r = check_null(fixture("multi_speed_cross"), 64);
  for (const auto& t : r.tuples) {
    const bool equal = t.components[0] == t.components[1] && t.components[1] == t.components[2];
    if (!equal) CHECK(t.verdict == Verdict::exempt);
  }
}

TEST_CASE("too few cone samples is rejected") {
  CHECK_THROWS_AS(check_null(fixture("scalar_null"), kMinConeSamples - 1), std::invalid_argument);
}

TEST_CASE("sphere directions are unit vectors") {
  for (int n : {2, 3}) {
    for (const auto& d : sphere_directions(n, 300)) {
      double s = 0.0;
      for (double x : d) s += x * x;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK(sphere_directions(1, 99).size() == 2);
}

TEST_CASE("example families satisfy the Q symmetry exactly") {
  CHECK(validate_symmetry(fixture("intro_example").q).empty());
  CHECK(validate_symmetry(fixture("scalar_null").q).empty());
  const auto cubic = fixture("cubic_2d");
  CHECK(validate_symmetry(cubic.cubic.q3).empty());
}

TEST_CASE("an asymmetric Q entry is reported once") {
  auto cs = CoefficientSet::zeros(3, SpeedVector({1.0, 1.0}));
  cs.q({0, 0, 1}, {0, 1, 2}) = 1.0;  // partner Q_2^{1,1, 0,2,1} stays 0
  const auto v = validate_symmetry(cs.q);
  REQUIRE(v.size() == 1);
  CHECK(v[0].value == 1.0);
  CHECK(v[0].partner_value == 0.0);
  cs.q({1, 0, 0}, {0, 2, 1}) = 1.0;
  CHECK(validate_symmetry(cs.q).empty());
}

TEST_CASE("decomposition identity on 1000 seeded gradient pairs") {
  const auto cs = fixture("intro_example");
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto dirs = oracle::random_directions(3, 1000, 11);
  double worst = 0.0;
  int bound_failures = 0;
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> gu(4), gv(4), hv(16);
    for (auto& x : gu) x = U(rng);
    for (auto& x : gv) x = U(rng);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) hv[a * 4 + b] = hv[b * 4 + a] = U(rng);
    const std::array<int, 3> triple{s % 2, (s / 2) % 2, (s / 4) % 2};
    const auto tb = tangential_bound_check(cs, triple, 1.0, dirs[s], gu, gv, hv);
    worst = std::max({worst, tb.residual_b, tb.residual_q});
    if (!tb.holds) ++bound_failures;
  }
  CHECK(worst <= 1e-12);
  CHECK(bound_failures == 0);
}

TEST_CASE("tangential bound rejects a non-unit direction") {
  const auto cs = fixture("scalar_null");
  std::vector<double> g(4, 0.1), h(16, 0.0), w{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(tangential_bound_check(cs, {0, 0, 0}, 1.0, w, g, g, h), std::invalid_argument);
}

TEST_CASE("kernel matches direct evaluation") {
  const auto cs = fixture("intro_example");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int D = 3, S = 4;
  std::vector<double> g(D * S), h(D * S * S);
  for (auto& x : g) x = U(rng);
  for (int I = 0; I < D; ++I)
    for (int a = 0; a < S; ++a)
      for (int b = a; b < S; ++b) h[I * 16 + a * 4 + b] = h[I * 16 + b * 4 + a] = U(rng);
  const auto F = evaluate_nonlinearity(cs, g, h);
  for (int I = 0; I < D; ++I) {
    double ref = 0.0;
    for (int J = 0; J < D; ++J)
      for (int K = 0; K < D; ++K)
        for (int j = 0; j < S; ++j)
          for (int k = 0; k < S; ++k) {
            ref += cs.b({I, J, K}, {j, k}) * g[J * S + j] * g[K * S + k];
            for (int l = 0; l < S; ++l) ref += cs.q({I, J, K}, {j, k, l}) * g[J * S + j] * h[K * 16 + k * 4 + l];
          }
    CHECK(F[I] == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("asymmetric hessian is rejected") {
  const auto cs = fixture("scalar_null");
  std::vector<double> g(4, 0.0), h(16, 0.0);
  h[1] = 1.0;
  CHECK_THROWS(evaluate_nonlinearity(cs, g, h));
}

TEST_CASE("coefficient JSON round trip") {
  for (const char* name : kFixtures) {
    const auto cs = fixture(name);
    const auto back = coefficients_from_json(coefficients_to_json(cs));
    CHECK(back.b.data() == cs.b.data());
    CHECK(back.q.data() == cs.q.data());
    CHECK(back.cubic.b3.data() == cs.cubic.b3.data());
    CHECK(back.cubic.q3.data() == cs.cubic.q3.data());
    CHECK(back.speeds.values() == cs.speeds.values());
  }
}

TEST_CASE("malformed coefficient documents") {
  CHECK_THROWS_AS(load_coefficients(std::string(NULLCONE_FIXTURE_DIR) + "/coefficients/malformed.json"),
                  CoefficientParseError);
  using nlohmann::json;
  CHECK_THROWS_AS(coefficients_from_json(json{{"dim", 3}, {"speeds", {1.0}}, {"B", {{{2, 1, 1, 0, 0}, 1.0}}}}),
                  CoefficientParseError);
  CHECK_THROWS_AS(coefficients_from_json(json{{"dim", 3}, {"speeds", {-1.0}}}), CoefficientParseError);
  CHECK_THROWS_AS(coefficients_from_json(json{{"dim", 5}, {"speeds", {1.0}}}), CoefficientParseError);
}

TEST_CASE("reports serialise verdicts") {
  const auto j = null_report_to_json(check_null(fixture("dtu_squared"), 64));
  CHECK(j.at("holds") == false);
  CHECK(j.contains("witness"));
}
