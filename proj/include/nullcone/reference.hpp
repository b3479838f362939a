#pragma once

#include <functional>

namespace nullcone::reference {

/// Gaussian data f = A exp(-r^2 / sigma^2), g = G exp(-r^2 / sigma^2).
struct GaussianData {
  double amplitude_f = 1.0;
  double amplitude_g = 0.0;
  double sigma = 1.0;
};

/// d'Alembert: (f(x - ct) + f(x + ct)) / 2 + (1 / 2c) int_{x-ct}^{x+ct} g.
double reference_dalembert_1d(const GaussianData& data, double c, double t, double x);

/// Radial free wave in three dimensions: u = [H(ct - r) - H(ct + r)] / (2r)
/// with H(s) = -A s e^{-s^2/sigma^2} + (G sigma^2 / 2c) e^{-s^2/sigma^2}; the
/// r -> 0 value uses the series -H'(ct) - r^2 H'''(ct) / 6.
double reference_spherical_3d(const GaussianData& data, double c, double t, double r);

/// Radial wave outside the ball r < rho with u = 0 on r = rho: v = r u solves
/// the half-line wave equation, so v is the d'Alembert solution of the data
/// r f(r), r g(r) extended oddly about rho. Velocity integrals use composite
/// Simpson with `panels` panels.
double reference_radial_exterior(const std::function<double(double)>& f, const std::function<double(double)>& g,
                                 double c, double rho, double t, double r, int panels = 4000);

}  // namespace nullcone::reference
