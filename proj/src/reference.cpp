#include "nullcone/reference.hpp"

#include <cmath>
#include <numbers>

namespace nullcone::reference {

double reference_dalembert_1d(const GaussianData& data, double c, double t, double x) {
  const double s2 = data.sigma * data.sigma;
  const double a = x - c * t;
  const double b = x + c * t;
  double u = 0.5 * data.amplitude_f * (std::exp(-a * a / s2) + std::exp(-b * b / s2));
  if (data.amplitude_g != 0.0) {
    const double integral =
        data.amplitude_g * data.sigma * std::sqrt(std::numbers::pi) * 0.5 * (std::erf(b / data.sigma) - std::erf(a / data.sigma));
    u += integral / (2.0 * c);
  }
  return u;
}

namespace {

struct Generator {
  double A;
  double K;
  double s2;

  double h(double s) const { return std::exp(-s * s / s2) * (-A * s + K); }
  double h1(double s) const { return std::exp(-s * s / s2) * (2.0 * A * s * s - A * s2 - 2.0 * K * s) / s2; }
  double h3(double s) const {
    const double poly = 8.0 * A * s * s * s * s - 24.0 * A * s * s * s2 + 6.0 * A * s2 * s2 - 8.0 * K * s * s * s +
                        12.0 * K * s * s2;
    return std::exp(-s * s / s2) * poly / (s2 * s2 * s2);
  }
};

}  // namespace

double reference_spherical_3d(const GaussianData& data, double c, double t, double r) {
  const double s2 = data.sigma * data.sigma;
  const Generator H{data.amplitude_f, data.amplitude_g * s2 / (2.0 * c), s2};
  const double a = c * t;
  r = std::abs(r);
  if (r < 1e-4 * data.sigma) return -H.h1(a) - r * r * H.h3(a) / 6.0;
  return (H.h(a - r) - H.h(a + r)) / (2.0 * r);
}

namespace {

// int_rho^x w(s) ds for x >= rho.
double simpson(const std::function<double(double)>& w, double rho, double x, int panels) {
  if (x <= rho) return 0.0;
  const int n = panels + panels % 2;
  const double h = (x - rho) / n;
  double s = w(rho) + w(x);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * w(rho + i * h);
  return s * h / 3.0;
}

}  // namespace

double reference_radial_exterior(const std::function<double(double)>& f, const std::function<double(double)>& g,
                                 double c, double rho, double t, double r, int panels) {
  auto V = [&](double s) { return s >= rho ? s * f(s) : -(2.0 * rho - s) * f(2.0 * rho - s); };
  auto W = [&](double s) { return s * g(s); };
  const double a = r - c * t;
  const double b = r + c * t;
  double v = 0.5 * (V(a) + V(b));
  double integral = simpson(W, rho, b, panels);
  if (a >= rho) {
    integral -= simpson(W, rho, a, panels);
  } else {
    integral -= simpson(W, rho, 2.0 * rho - a, panels);
  }
  v += integral / (2.0 * c);
  return r > 0.0 ? v / r : 0.0;
}

}  // namespace nullcone::reference
