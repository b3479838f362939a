#include "nullcone/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace nullcone::fit {

namespace {

struct Line {
  double slope;
  double intercept;
  double rms;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit abscissae are all equal");
  Line l{sxy / sxx, 0.0, 0.0};
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace

GrowthFit fit_growth(const Series& series) {
  if (series.size() < 5) throw std::invalid_argument("growth fit needs at least 5 samples");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [t, v] : series) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("growth fit needs positive finite values");
    if (t < 0.0) throw std::invalid_argument("growth fit needs t >= 0");
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  const Line l = least_squares(x, y);
  return {l.slope, l.intercept, l.rms, series.size()};
}

DecayFit fit_decay(const Series& series, double t_lo, double t_hi) {
  std::vector<double> x;
  std::vector<double> y;
  DecayFit out;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0.0)) {
      out.exited_exactly = true;
      return out;
    }
    x.push_back(t);
    y.push_back(std::log(v));
  }
  if (x.size() < 2) throw std::invalid_argument("decay fit window holds fewer than 2 samples");
  const Line l = least_squares(x, y);
  out.rate = -l.slope;
  out.prefactor = std::exp(l.intercept);
  out.residual = l.rms;
  out.samples = x.size();
  return out;
}

double fit_order(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size() || h.size() < 2) throw std::invalid_argument("order fit needs matching series of length >= 2");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0)) throw std::invalid_argument("order fit needs positive values");
    x.push_back(std::log(h[i]));
    y.push_back(std::log(error[i]));
  }
  return least_squares(x, y).slope;
}

}  // namespace nullcone::fit
