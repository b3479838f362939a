// One PASS/FAIL line per acceptance criterion, with wall time.
// Exit status is the number of failed criteria (capped at 125).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <sys/wait.h>

#include "nullcone/coefficients_io.hpp"
#include "nullcone/parallel.hpp"
#include "nullcone/suites.hpp"
#include "oracles.hpp"

using namespace nullcone;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::filesystem::path kFixtures = NULLCONE_FIXTURE_DIR;

nullform::CoefficientSet coefficients(const std::string& name) {
  return nullform::load_coefficients(kFixtures / "coefficients" / (name + ".json"));
}

bool check(const suites::SuiteResult& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c.pass;
  return false;
}

std::string failed_checks(const suites::SuiteResult& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += (s.empty() ? "" : ",") + c.id;
  return s.empty() ? "all checks pass" : "failed: " + s;
}

Outcome suite_outcome(const std::string& name) {
  const auto r = suites::run_suite(name);
  return {r.pass, failed_checks(r)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NULLCONE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --- criteria ---------------------------------------------------------------

Outcome null_checker() {
  int flips = 0;
  double worst_hold = 0.0;
  for (const char* name : {"intro_example", "scalar_null", "dtu_squared", "cubic_2d", "cubic_2d_violation",
                           "multi_speed_cross", "multi_speed_violation"}) {
    const auto cs = coefficients(name);
    const auto report = nullform::check_null(cs, 256);
    const auto brute = oracle::brute_null(cs, 2560, 99);
    for (const auto& t : report.tuples) {
      if (t.verdict == nullform::Verdict::exempt) continue;
      const auto it = brute.find(t.components);
      if (it == brute.end() || it->second.violated != (t.verdict == nullform::Verdict::violated)) ++flips;
      if (t.verdict == nullform::Verdict::holds) worst_hold = std::max(worst_hold, t.residual);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "flips %d, worst holding residual %.3g", flips, worst_hold);
  return {flips == 0 && worst_hold <= 1e-10, buf};
}

Outcome symmetry_and_decomposition() {
  bool exact = nullform::validate_symmetry(coefficients("intro_example").q).empty() &&
               nullform::validate_symmetry(coefficients("scalar_null").q).empty() &&
               nullform::validate_symmetry(coefficients("cubic_2d").cubic.q3).empty();
  auto planted = nullform::CoefficientSet::zeros(3, nullform::SpeedVector({1.0, 1.0}));
  planted.q({0, 1, 0}, {1, 2, 3}) = 0.5;
  exact = exact && nullform::validate_symmetry(planted.q).size() == 1;

  const auto cs = coefficients("intro_example");
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto dirs = oracle::random_directions(3, 1000, 1001);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> gu(4), gv(4), hv(16);
    for (auto& x : gu) x = U(rng);
    for (auto& x : gv) x = U(rng);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) hv[a * 4 + b] = hv[b * 4 + a] = U(rng);
    const std::array<int, 3> triple{s % 2, (s / 2) % 2, (s / 4) % 2};
    const auto tb = nullform::tangential_bound_check(cs, triple, 1.0, dirs[s], gu, gv, hv);
    worst = std::max({worst, tb.residual_b, tb.residual_q});
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "symmetry %s, decomposition residual %.3g", exact ? "exact" : "wrong", worst);
  return {exact && worst <= 1e-12, buf};
}

Outcome decay_dichotomy(suites::SuiteResult& decay) {
  decay = suites::run_suite("decay");
  const int code = run_cli("simulate --config " + (kFixtures / "scenarios" / "nonnull_blowup.json").string() +
                           " --out " + (std::filesystem::temp_directory_path() / "nullcone_acceptance_blowup").string());
  const bool ok = check(decay, "null_form_global") && check(decay, "non_null_blowup") && code == 3;
  return {ok, failed_checks(decay) + ", cli blow-up exit " + std::to_string(code)};
}

Outcome determinism() {
  std::string bad;
  for (const char* name : {"commutators", "convergence", "divergence"}) {
    std::string first;
    for (int w : {1, 2, 8}) {
      set_worker_count(w);
      const auto dump = suites::run_suite(name).report.dump();
      if (first.empty()) first = dump;
      if (dump != first) bad += std::string(bad.empty() ? "" : ",") + name + "@" + std::to_string(w);
    }
  }
  set_worker_count(1);
  return {bad.empty(), bad.empty() ? "byte-identical at 1, 2, 8 workers" : "differs: " + bad};
}

}  // namespace

int main() {
  int failures = 0;
  suites::SuiteResult decay;
  auto row = [&](int id, const char* what, double limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d  %-34s %8.1f s  %s%s\n", pass ? "PASS" : "FAIL", id, what, secs, o.detail.c_str(),
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  };

  row(1, "null-condition checker", 5, null_checker);
  row(2, "symmetry and decomposition", 0, symmetry_and_decomposition);
  row(3, "solver convergence", 120, [] { return suite_outcome("convergence"); });
  row(4, "energy machinery", 0, [] { return suite_outcome("divergence"); });
  row(5, "weighted energy inequality", 300, [] { return suite_outcome("we"); });
  row(6, "pointwise ratio diagnostic", 0, [] { return suite_outcome("ks"); });
  row(7, "commutator identities", 0, [] { return suite_outcome("commutators"); });
  row(8, "global / blow-up dichotomy", 600, [&] { return decay_dichotomy(decay); });
  row(9, "2D cubic null form", 0, [&] {
    return Outcome{check(decay, "cubic_global") && check(decay, "cubic_null_condition"), "from the decay suite run"};
  });
  row(10, "exterior local energy decay", 0, [] { return suite_outcome("led"); });
  row(11, "determinism", 0, determinism);

  std::printf("%d of 11 criteria failed\n", failures);
  return failures > 125 ? 125 : failures;
}
