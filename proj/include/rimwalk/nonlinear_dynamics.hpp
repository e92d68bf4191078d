// Exact (nonlinear) hybrid dynamics of the rimless wheel.
//
// Stance: m l^2 theta'' - m g l sin(theta) = 0, integrated with fixed-step
// RK4. The impact section theta = alpha/2 + phi is located by bisection on the
// step that brackets it. The collision map scales the angular velocity by
// cos(alpha) and relabels the legs so every stance uses the same chart.
#pragma once

#include <optional>
#include <vector>

#include "rimwalk/gait_trace.hpp"
#include "rimwalk/wheel_model.hpp"

namespace rimwalk {

struct IntegratorConfig {
  double dt = 1e-4;             // RK4 step (s)
  double event_tol = 1e-10;     // impact localization tolerance in theta (rad)
  double max_step_time = 60.0;  // stance timeout (s)
  /// Record every `trace_stride`-th RK4 step into the trace; 0 disables it.
  int trace_stride = 0;
};

/// Throws std::invalid_argument unless dt, event_tol and max_step_time are
/// positive and trace_stride is non-negative.
void validate(const IntegratorConfig& cfg);

enum class Termination { Impact, InsufficientEnergy, Timeout };

const char* to_string(Termination t);

struct StancePhaseResult {
  StanceState end_state;
  double duration = 0.0;
  Termination termination = Termination::Impact;
  GaitTrace trace;  // empty unless cfg.trace_stride > 0
};

/// (g/l) sin(theta).
double nonlinear_accel(const WheelParams& p, const StanceState& s);

/// m g l cos(theta) + 1/2 m l^2 theta_dot^2.
double nonlinear_energy(const WheelParams& p, const StanceState& s);

/// One classical RK4 step of the nonlinear stance equation.
StanceState rk4_step(const WheelParams& p, const StanceState& s, double h);

/// Integrates one stance phase from `start` until the impact section is hit,
/// the wheel rolls back before clearing the apex (theta_dot <= 0 with
/// theta < 0), or the timeout elapses. Trace times start at `t0`.
/// Throws std::invalid_argument when `start` lies outside the stance range.
StancePhaseResult integrate_stance(const WheelParams& p, const IntegratorConfig& cfg,
                                   const StanceState& start, double t0 = 0.0);

/// Default tolerance on the pre-impact angle accepted by collision_map.
inline constexpr double kSectionTol = 1e-8;

/// theta_dot+ = cos(alpha) theta_dot-, theta+ = -(alpha/2 - phi).
/// Throws std::domain_error when `pre` is not on the impact section
/// (|theta - (alpha/2+phi)| > tol) or is not moving forward.
StanceState collision_map(const WheelParams& p, const StanceState& pre,
                          double tol = kSectionTol);

struct WalkResult {
  std::vector<StepRecord> steps;
  /// Impact when all requested steps completed.
  Termination termination = Termination::Impact;
  /// State where a failed stance stopped; unset on success.
  std::optional<StanceState> failure_state;
  GaitTrace trace;
};

/// Alternates stance integration and collisions for up to `n_steps` impacts,
/// starting from a stance state (normally a post-impact state). Stops early
/// with partial records when a stance fails. A start already on the impact
/// section is rejected with std::invalid_argument; map it through
/// collision_map first.
WalkResult walk(const WheelParams& p, const IntegratorConfig& cfg, const StanceState& start,
                int n_steps);

}  // namespace rimwalk
