#include "nullcone/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace nullcone::profiles {

using nlohmann::json;

double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

Profile Profile::gaussian(double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
  Profile p;
  p.kind = Kind::gaussian;
  p.amplitude = amplitude;
  p.sigma = sigma;
  return p;
}

Profile Profile::bump(double amplitude, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  Profile p;
  p.kind = Kind::bump;
  p.amplitude = amplitude;
  p.radius = radius;
  return p;
}

Profile Profile::shell(double amplitude, double center, double width, double anisotropy) {
  if (!(width > 0.0) || !(center >= width)) throw std::invalid_argument("shell needs 0 < width <= center");
  if (std::abs(anisotropy) >= 1.0) throw std::invalid_argument("shell anisotropy must lie in (-1, 1)");
  Profile p;
  p.kind = Kind::shell;
  p.amplitude = amplitude;
  p.center = center;
  p.width = width;
  p.anisotropy = anisotropy;
  return p;
}

double Profile::operator()(const Point& x) const {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::gaussian:
      return amplitude * std::exp(-r2 / (sigma * sigma));
    case Kind::bump:
      return amplitude * profiles::bump(std::sqrt(r2) / radius);
    case Kind::shell: {
      const double r = std::sqrt(r2);
      const double radial = amplitude * profiles::bump((r - center) / width);
      if (anisotropy == 0.0 || radial == 0.0) return radial;
      return radial * (1.0 + anisotropy * (x[0] * x[0] - x[1] * x[1]) / r2);
    }
  }
  return 0.0;
}

double Profile::support_radius() const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::gaussian:
      return sigma * std::sqrt(-std::log(1e-16));
    case Kind::bump:
      return radius;
    case Kind::shell:
      return center + width;
  }
  return 0.0;
}

double Profile::inner_radius() const { return kind == Kind::shell ? center - width : 0.0; }

Forcing Forcing::spacetime_bump(double amplitude, double t0, double t1, double radius) {
  if (!(t1 > t0) || !(radius > 0.0)) throw std::invalid_argument("forcing needs t0 < t1 and radius > 0");
  Forcing f;
  f.kind = Kind::spacetime_bump;
  f.amplitude = amplitude;
  f.t0 = t0;
  f.t1 = t1;
  f.radius = radius;
  return f;
}

double Forcing::operator()(double t, const Point& x) const {
  if (kind == Kind::none) return 0.0;
  const double tau = 0.5 * (t1 - t0);
  const double tm = 0.5 * (t0 + t1);
  const double temporal = bump((t - tm) / tau);
  if (temporal == 0.0) return 0.0;
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return amplitude * temporal * bump(r / radius);
}

json to_json(const Profile& p) {
  switch (p.kind) {
    case Profile::Kind::zero:
      return {{"kind", "zero"}};
    case Profile::Kind::gaussian:
      return {{"kind", "gaussian"}, {"amplitude", p.amplitude}, {"sigma", p.sigma}};
    case Profile::Kind::bump:
      return {{"kind", "bump"}, {"amplitude", p.amplitude}, {"radius", p.radius}};
    case Profile::Kind::shell:
      return {{"kind", "shell"},
              {"amplitude", p.amplitude},
              {"center", p.center},
              {"width", p.width},
              {"anisotropy", p.anisotropy}};
  }
  return {};
}

Profile profile_from_json(const json& doc) {
  if (doc.is_null()) return Profile::zero();
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "zero") return Profile::zero();
  const double a = doc.value("amplitude", 1.0);
  if (kind == "gaussian") return Profile::gaussian(a, doc.value("sigma", 1.0));
  if (kind == "bump") return Profile::bump(a, doc.value("radius", 1.0));
  if (kind == "shell") {
    return Profile::shell(a, doc.at("center").get<double>(), doc.at("width").get<double>(), doc.value("anisotropy", 0.0));
  }
  throw std::invalid_argument("unknown profile kind '" + kind + "'");
}

json to_json(const Forcing& f) {
  if (f.kind == Forcing::Kind::none) return {{"kind", "none"}};
  return {{"kind", "spacetime_bump"}, {"amplitude", f.amplitude}, {"t0", f.t0}, {"t1", f.t1}, {"radius", f.radius}};
}

Forcing forcing_from_json(const json& doc) {
  if (doc.is_null()) return Forcing::none();
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "none") return Forcing::none();
  if (kind == "spacetime_bump") {
    return Forcing::spacetime_bump(doc.value("amplitude", 1.0), doc.value("t0", 1.0), doc.value("t1", 2.0),
                                   doc.value("radius", 1.0));
  }
  throw std::invalid_argument("unknown forcing kind '" + kind + "'");
}

}  // namespace nullcone::profiles
