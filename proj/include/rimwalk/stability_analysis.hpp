// Closed-form stability quantities of the passive rimless wheel gait.
//
// Step-to-step the pre-impact kinetic energy obeys K_{i+1} = eps K_i + dE with
// eps = cos^2(alpha), so the gait converges to K_eq = dE / (1 - eps). Errors
// in the angular velocity contract by R = cos(alpha) through each collision
// and by Q = cos(alpha) through each stance of the linearized model, giving
// the return-map eigenvalue Q R = cos^2(alpha).
//
// The steady period of the linearized gait satisfies tanh(omega T*) = F with
//   F(alpha, phi) = 2 sin(alpha) sqrt(2 alpha phi)
//                   / (alpha (1 - cos alpha) + 2 phi (1 + cos alpha)),
// which peaks at F = 1 on phi_min = (alpha/2) tan^2(alpha/2). Below phi_min
// the linearized wheel cannot clear the apex.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rimwalk/wheel_model.hpp"

namespace rimwalk {

struct FixedPoint {
  double k_eq = 0.0;             // steady pre-impact kinetic energy (J)
  double theta_dot_pre = 0.0;    // steady pre-impact angular velocity (rad/s)
  double theta_dot_post = 0.0;   // cos(alpha) * theta_dot_pre
};

/// Nonlinear steady gait from the energy recurrence. Valid params guarantee
/// alpha >= kAlphaFloor so eps < 1.
FixedPoint fixed_point_energy(const WheelParams& p);

/// Iterates K_{i+1} = eps K_i + dE; returns K_0 .. K_n.
std::vector<double> kinetic_energy_recurrence(const WheelParams& p, double k0, int n);

/// F(alpha, phi). Defined for any alpha in (0, pi/2) and phi >= 0.
double period_function_value(double alpha, double phi);

/// dF/dphi, derived from the quotient rule on F. Its sign flips at phi_min.
double period_function_dphi(double alpha, double phi);

/// (alpha/2) tan^2(alpha/2).
double phi_min(double alpha);

/// Locates the maximizer of F(alpha, .) without the closed form, by
/// bisection on the sign of dF/dphi over (0, phi_hi].
double phi_min_numeric(double alpha, double phi_hi = 2.0);

/// F within this distance of 1 is reported as a diverging period.
inline constexpr double kDivergenceGap = 1e-9;

enum class PeriodStatus { Finite, BelowMin, Diverging };

const char* to_string(PeriodStatus s);

struct PeriodFunction {
  double f_value = 0.0;
  double phi_min = 0.0;
  PeriodStatus status = PeriodStatus::Finite;
  std::optional<double> t_star;  // set iff status == Finite
};

/// tanh^{-1}(F) / omega on the branch phi > phi_min.
PeriodFunction period_function(double alpha, double phi, double omega);
PeriodFunction period_function(const WheelParams& p);

/// 1/2 ln((1 + x) / (1 - x)).
double atanh_log(double x);

struct TransitionFactors {
  double q_bar_exact = 0.0;   // cosh(wT*) - (theta_eq- w / theta_dot_eq-) sinh(wT*)
  double q_bar_energy = 0.0;  // (theta_dot+/theta_dot-) (E- - Pmax) / (E+ - Pmax)
  double q_bar_simple = 0.0;  // theta_dot_eq+ / theta_dot_eq-
  double q_bar_matrix = 0.0;  // [0 1] Q [0; 1] of the full 2x2 stance transition
  double r_bar = 0.0;         // cos(alpha)
  /// Period error per unit post-impact velocity error,
  /// dT = period_gain * d(theta_dot+). Positive means a longer step.
  double period_gain = 0.0;
  double energy_margin_ratio = 0.0;  // (E- - Pmax) / (E+ - Pmax)
  double t_star = 0.0;
  Eigen::Matrix2d q_matrix = Eigen::Matrix2d::Zero();
};

/// Evaluates every form of the stance transition on the steady linearized
/// gait. Throws std::domain_error unless phi > phi_min with a finite period.
TransitionFactors transition_factors(const WheelParams& p);

/// (E_eq- - P_max) / (E_eq+ - P_max) with linearized energies of the steady
/// linearized gait.
double energy_margin_ratio(const WheelParams& p);

/// Q R = (theta_dot_eq+ / theta_dot_eq-)^2 = cos^2(alpha).
double poincare_eigenvalue(const WheelParams& p);

struct StabilityReport {
  double alpha = 0.0;
  double phi = 0.0;
  double epsilon = 0.0;
  double delta_e = 0.0;
  double k_eq = 0.0;
  double theta_dot_eq_pre = 0.0;
  double theta_dot_eq_post = 0.0;
  double q_bar = 0.0;
  double r_bar = 0.0;
  double poincare_eigenvalue = 0.0;
  double phi_min = 0.0;
  PeriodStatus t_star_status = PeriodStatus::Finite;
  std::optional<double> t_star;
  std::optional<std::string> warning;
};

StabilityReport stability_report(const WheelParams& p);

/// Header `alpha,phi,epsilon,delta_e,k_eq,q_bar,r_bar,eigenvalue,phi_min,t_star`.
std::string report_csv_header();
/// One row; t_star is `below-min` or `diverged` when absent.
std::string report_csv_row(const StabilityReport& r);
/// Inverse of report_csv_row for the exported columns. Throws
/// std::invalid_argument on malformed input.
StabilityReport parse_report_csv_row(const std::string& row);
/// Multi-line human-readable summary.
std::string report_text(const StabilityReport& r);

}  // namespace rimwalk
