#include "rimwalk/wheel_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rimwalk {

WheelParams::WheelParams(double m, double l, double g, double alpha, double phi)
    : m_(m), l_(l), g_(g), alpha_(alpha), phi_(phi), omega_(std::sqrt(g / l)) {}

WheelParams WheelParams::with_phi(double phi) const {
  RawParams r = raw();
  r.phi = phi;
  return make_params(r);
}

WheelParams WheelParams::with_alpha(double alpha) const {
  RawParams r = raw();
  r.alpha = alpha;
  return make_params(r);
}

namespace {

void require(bool ok, const char* what, double value) {
  if (ok) return;
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  throw ParamError(os.str());
}

}  // namespace

ParamValidation validate_params(const RawParams& raw) {
  // Negated comparisons so NaN is rejected too.
  require(raw.m > 0.0 && std::isfinite(raw.m), "mass m must be positive", raw.m);
  require(raw.l > 0.0 && std::isfinite(raw.l), "leg length l must be positive", raw.l);
  require(raw.g > 0.0 && std::isfinite(raw.g), "gravity g must be positive", raw.g);
  require(raw.alpha < std::numbers::pi / 2.0, "alpha must be below pi/2", raw.alpha);
  require(raw.alpha >= kAlphaFloor, "alpha must be at least 1e-3 rad", raw.alpha);
  require(raw.phi > 0.0 && std::isfinite(raw.phi), "slope phi must be positive", raw.phi);

  ParamValidation out{WheelParams(raw.m, raw.l, raw.g, raw.alpha, raw.phi), std::nullopt};
  if (!out.params.linearization_in_range()) {
    std::ostringstream os;
    os << "alpha/2 + phi = " << out.params.theta_pre()
       << " exceeds 1 rad; the linearized model is outside its effective range";
    out.warning = os.str();
  }
  return out;
}

double kinetic_energy(const WheelParams& p, double theta_dot) {
  return 0.5 * p.inertia() * theta_dot * theta_dot;
}

double energy_loss_coefficient(double alpha) {
  const double c = std::cos(alpha);
  return c * c;
}

double energy_loss_coefficient(const WheelParams& p) {
  return energy_loss_coefficient(p.alpha());
}

double restored_energy(double m, double g, double l, double alpha, double phi) {
  return 2.0 * m * g * l * std::sin(0.5 * alpha) * std::sin(phi);
}

double restored_energy(const WheelParams& p) {
  return restored_energy(p.m(), p.g(), p.l(), p.alpha(), p.phi());
}

StanceState steady_pre_impact_state(const WheelParams& p) {
  // 1 - cos^2 = sin^2 avoids cancellation for small alpha.
  const double s = std::sin(p.alpha());
  const double k_eq = restored_energy(p) / (s * s);
  return {p.theta_pre(), std::sqrt(2.0 * k_eq / p.inertia())};
}

}  // namespace rimwalk
