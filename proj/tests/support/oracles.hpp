#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library's own evaluation paths beyond reading tensor entries.

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "nullcone/nullform.hpp"

namespace oracle {

using nullcone::nullform::CoefficientSet;

// Uniform random unit vectors (normalised Gaussians), one fixed seed.
inline std::vector<std::vector<double>> random_directions(int n, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<std::vector<double>> out;
  if (n == 1) return {{1.0}, {-1.0}};
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double s = 0.0;
    for (auto& x : v) {
      x = N(rng);
      s += x * x;
    }
    if (s < 1e-12) continue;
    for (auto& x : v) x /= std::sqrt(s);
    out.push_back(v);
  }
  return out;
}

struct BruteVerdict {
  bool violated = false;
  double residual = 0.0;
};

// Key: component tuple (0-based). Only equal-speed tuples appear.
using BruteReport = std::map<std::vector<int>, BruteVerdict>;

// Evaluates every quadratic (and, in 2D, cubic) form on null covectors
// (+-c, omega) with plain nested loops.
inline BruteReport brute_null(const CoefficientSet& cs, int directions, unsigned seed, double tol = 1e-10) {
  BruteReport out;
  const int n = cs.dim;
  const int S = n + 1;
  const int D = cs.components();
  const auto dirs = random_directions(n, directions, seed);
  auto covectors = [&](double c) {
    std::vector<std::vector<double>> xs;
    for (const auto& w : dirs)
      for (double sheet : {1.0, -1.0}) {
        std::vector<double> xi{sheet * c};
        xi.insert(xi.end(), w.begin(), w.end());
        xs.push_back(xi);
      }
    return xs;
  };
  for (int I = 0; I < D; ++I)
    for (int J = 0; J < D; ++J)
      for (int K = 0; K < D; ++K) {
        const double c = cs.speeds[static_cast<std::size_t>(I)];
        if (cs.speeds[static_cast<std::size_t>(J)] != c || cs.speeds[static_cast<std::size_t>(K)] != c) continue;
        double worst = 0.0;
        for (const auto& xi : covectors(c)) {
          double sb = 0.0, sq = 0.0;
          for (int j = 0; j < S; ++j)
            for (int k = 0; k < S; ++k) {
              if (!cs.b.empty()) sb += cs.b({I, J, K}, {j, k}) * xi[j] * xi[k];
              if (!cs.q.empty())
                for (int l = 0; l < S; ++l) sq += cs.q({I, J, K}, {j, k, l}) * xi[j] * xi[k] * xi[l];
            }
          worst = std::max({worst, std::abs(sb), std::abs(sq)});
        }
        out[{I, J, K}] = {worst > tol, worst};
      }
  if (n == 2 && !cs.cubic.empty()) {
    const double c = cs.speeds[0];
    const auto& b3 = cs.cubic.b3;
    const auto& q3 = cs.cubic.q3;
    for (int I = 0; I < D; ++I)
      for (int J = 0; J < D; ++J)
        for (int K = 0; K < D; ++K)
          for (int L = 0; L < D; ++L) {
            double worst = 0.0;
            for (const auto& xi : covectors(c)) {
              double sb = 0.0, sq = 0.0;
              for (int j = 0; j < S; ++j)
                for (int k = 0; k < S; ++k)
                  for (int l = 0; l < S; ++l) {
                    if (!b3.empty()) sb += b3({I, J, K, L}, {j, k, l}) * xi[j] * xi[k] * xi[l];
                    if (!q3.empty())
                      for (int m = 0; m < S; ++m) sq += q3({I, J, K, L}, {j, k, l, m}) * xi[j] * xi[k] * xi[l] * xi[m];
                  }
              worst = std::max({worst, std::abs(sb), std::abs(sq)});
            }
            out[{I, J, K, L}] = {worst > tol, worst};
          }
  }
  return out;
}

// Free radial wave in 3D from u(0) = A exp(-r^2/s^2), u_t(0) = 0:
// r u = ((r - ct) F(r - ct) + (r + ct) F(r + ct)) / 2 with F the even profile.
inline double spherical_gaussian(double A, double sigma, double c, double t, double r) {
  auto F = [&](double s) { return A * std::exp(-s * s / (sigma * sigma)); };
  if (r < 1e-8) {
    // limit r -> 0: d/ds (s F(s)) at s = ct
    const double s = c * t;
    return F(s) * (1.0 - 2.0 * s * s / (sigma * sigma));
  }
  return ((r - c * t) * F(r - c * t) + (r + c * t) * F(r + c * t)) / (2.0 * r);
}

// d'Alembert with zero velocity.
inline double dalembert_gaussian(double A, double sigma, double c, double t, double x) {
  auto F = [&](double s) { return A * std::exp(-s * s / (sigma * sigma)); };
  return 0.5 * (F(x - c * t) + F(x + c * t));
}

// Least-squares slope of log e against log h.
inline double slope(const std::vector<double>& h, const std::vector<double>& e) {
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
