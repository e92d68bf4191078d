// Linearized stance dynamics theta'' = omega^2 theta, evaluated in closed form.
//
// State space x = [theta; theta_dot], x' = A x with A = [0 1; omega^2 0].
// The flow is e^{At} = [cosh  sinh/omega; omega sinh  cosh] and conserves the
// quadratic energy E(x) = P_max + 1/2 x^T W0 x, W0 = diag(-m g l, m l^2),
// because W0 A is skew-symmetric.
#pragma once

#include <optional>

#include <Eigen/Core>

#include "rimwalk/gait_trace.hpp"
#include "rimwalk/nonlinear_dynamics.hpp"
#include "rimwalk/wheel_model.hpp"

namespace rimwalk {

/// Transition matrix of the linearized stance over an elapsed time.
struct LinearFlow {
  double omega = 0.0;
  double t = 0.0;
  double cosh_wt = 1.0;
  double sinh_wt = 0.0;

  StanceState apply(const StanceState& s) const {
    return {cosh_wt * s.theta + sinh_wt / omega * s.theta_dot,
            omega * sinh_wt * s.theta + cosh_wt * s.theta_dot};
  }
  Eigen::Matrix2d matrix() const;
  double determinant() const { return cosh_wt * cosh_wt - sinh_wt * sinh_wt; }
};

LinearFlow linear_flow(const WheelParams& p, double t);

/// Throws std::invalid_argument for t < 0.
StanceState linear_flow_apply(const WheelParams& p, double t, const StanceState& s);

/// A = [0 1; omega^2 0].
Eigen::Matrix2d state_matrix(const WheelParams& p);
/// W0 = diag(-m g l, m l^2).
Eigen::Matrix2d energy_weight_matrix(const WheelParams& p);

/// P_max + 1/2 (m l^2 theta_dot^2 - m g l theta^2).
double linear_energy(const WheelParams& p, const StanceState& s);

/// Energy above the barrier, E - P_max = 1/2 m l^2 (theta_dot^2 - omega^2 theta^2).
double linear_energy_margin(const WheelParams& p, const StanceState& s);

/// Solves for the first t > 0 at which the linear flow from `s` reaches the
/// impact section theta = alpha/2 + phi. Returns nullopt when it never does:
/// before the apex that means E(s) <= P_max. The time comes from the
/// sinh/cosh relation between the start and section states and is polished
/// by safeguarded Newton on the increasing branch to 1e-12 s.
/// Throws std::invalid_argument when s.theta is already at or past the section.
std::optional<double> linear_time_to_section(const WheelParams& p, const StanceState& s);

struct ComPoint {
  double x = 0.0;
  double z = 0.0;
};

/// CoM of the linearized wheel relative to the contact point:
/// x = l/2 (theta sqrt(1-theta^2) + asin theta), z = l (1 - theta^2/2).
/// Throws std::domain_error for |theta| > 1.
ComPoint linear_com_position(const WheelParams& p, double theta);

/// CoM velocity (l theta_dot sqrt(1-theta^2), -l theta theta_dot).
ComPoint linear_com_velocity(const WheelParams& p, const StanceState& s);

/// Energy restored per step by the quadratic potential between the post- and
/// pre-impact postures, m g l alpha phi.
double linear_restored_energy(const WheelParams& p);

/// Pre-impact state of the steady linearized gait,
/// theta_dot = omega sqrt(2 alpha phi) / sin(alpha). Unlike the nonlinear
/// fixed point it only walks when phi exceeds the minimum slope.
StanceState linear_steady_pre_impact_state(const WheelParams& p);

/// Alternates linear_time_to_section and collision_map with exact flows.
/// `sample_dt > 0` fills the trace at that spacing plus both ends of every
/// stance. Energies in the step records are linearized energies. Stops with
/// InsufficientEnergy when a stance cannot reach the section.
WalkResult linear_walk(const WheelParams& p, const StanceState& start, int n_steps,
                       double sample_dt = 0.0);

}  // namespace rimwalk
