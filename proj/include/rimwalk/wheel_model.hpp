// Rimless wheel model: physical parameters, stance state and step records.
//
// Angles are in radians and all quantities are SI. The stance angle theta is
// measured from the upward vertical through the contact point, so theta = 0 is
// the apex of the stance arc (the potential barrier). Walking downhill
// increases theta; the next spoke strikes at theta = alpha/2 + phi and the new
// stance starts at theta = -(alpha/2 - phi).
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace rimwalk {

/// Smallest accepted inter-spoke angle. Below it cos^2(alpha) -> 1 and the
/// steady kinetic energy Delta E / (1 - eps) blows up.
inline constexpr double kAlphaFloor = 1e-3;

/// Unvalidated parameter set as read from a config file or the command line.
struct RawParams {
  double m = 1.0;
  double l = 1.0;
  double g = 9.81;
  double alpha = 0.7853981633974483;  // pi/4
  double phi = 0.10;
};

/// Thrown for parameter sets that cannot describe a walking rimless wheel.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParamValidation;

/// Validated, immutable wheel parameters. Only `validate_params` builds one.
class WheelParams {
 public:
  double m() const { return m_; }
  double l() const { return l_; }
  double g() const { return g_; }
  double alpha() const { return alpha_; }
  double phi() const { return phi_; }
  /// Natural rate of the linearized stance, sqrt(g/l).
  double omega() const { return omega_; }

  /// Inertia about the contact point, m l^2.
  double inertia() const { return m_ * l_ * l_; }
  /// Potential energy at the apex, m g l.
  double p_max() const { return m_ * g_ * l_; }

  /// Stance angle at which the next spoke strikes, alpha/2 + phi.
  double theta_pre() const { return 0.5 * alpha_ + phi_; }
  /// Stance angle right after the spoke exchange, -(alpha/2 - phi).
  double theta_post() const { return phi_ - 0.5 * alpha_; }

  /// The quadratic potential stays meaningful while max|theta| <= 1.
  bool linearization_in_range() const { return theta_pre() <= 1.0; }

  RawParams raw() const { return {m_, l_, g_, alpha_, phi_}; }

  /// Copy with a different slope; revalidates.
  WheelParams with_phi(double phi) const;
  /// Copy with a different spoke angle; revalidates.
  WheelParams with_alpha(double alpha) const;

 private:
  friend ParamValidation validate_params(const RawParams& raw);
  WheelParams(double m, double l, double g, double alpha, double phi);

  double m_;
  double l_;
  double g_;
  double alpha_;
  double phi_;
  double omega_;
};

struct ParamValidation {
  WheelParams params;
  /// Set when alpha/2 + phi > 1, i.e. outside the range where the linearized
  /// model is meaningful. Not an error.
  std::optional<std::string> warning;
};

/// Checks m, l, g > 0, kAlphaFloor <= alpha < pi/2 and phi > 0.
/// Throws ParamError otherwise.
ParamValidation validate_params(const RawParams& raw);

/// Shorthand that drops the warning.
inline WheelParams make_params(const RawParams& raw) {
  return validate_params(raw).params;
}

struct StanceState {
  double theta = 0.0;
  double theta_dot = 0.0;
};

struct StepRecord {
  int index = 0;
  StanceState pre_impact;
  StanceState post_impact;
  double period = 0.0;
  double kinetic_pre = 0.0;
  double kinetic_post = 0.0;
  double energy_total_pre = 0.0;
  double energy_total_post = 0.0;
};

/// Kinetic energy 1/2 m l^2 theta_dot^2; identical for both models.
double kinetic_energy(const WheelParams& p, double theta_dot);

/// cos^2(alpha): fraction of kinetic energy kept through an impact.
double energy_loss_coefficient(double alpha);
double energy_loss_coefficient(const WheelParams& p);

/// Gravitational energy gained per step, 2 m g l sin(alpha/2) sin(phi).
double restored_energy(double m, double g, double l, double alpha, double phi);
double restored_energy(const WheelParams& p);

/// Pre-impact state of the steady gait of the nonlinear wheel:
/// theta = alpha/2 + phi, K = Delta E / (1 - eps).
StanceState steady_pre_impact_state(const WheelParams& p);

}  // namespace rimwalk
