#include "rimwalk/nonlinear_dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rimwalk {

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.event_tol > 0.0)) throw std::invalid_argument("event_tol must be positive");
  if (!(cfg.max_step_time > 0.0)) throw std::invalid_argument("max_step_time must be positive");
  if (cfg.trace_stride < 0) throw std::invalid_argument("trace_stride must be non-negative");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Impact:
      return "Impact";
    case Termination::InsufficientEnergy:
      return "InsufficientEnergy";
    case Termination::Timeout:
      return "Timeout";
  }
  return "?";
}

double nonlinear_accel(const WheelParams& p, const StanceState& s) {
  return p.g() / p.l() * std::sin(s.theta);
}

double nonlinear_energy(const WheelParams& p, const StanceState& s) {
  return p.p_max() * std::cos(s.theta) + kinetic_energy(p, s.theta_dot);
}

StanceState rk4_step(const WheelParams& p, const StanceState& s, double h) {
  const double w2 = p.g() / p.l();
  auto accel = [w2](double theta) { return w2 * std::sin(theta); };

  const double k1x = s.theta_dot;
  const double k1v = accel(s.theta);
  const double k2x = s.theta_dot + 0.5 * h * k1v;
  const double k2v = accel(s.theta + 0.5 * h * k1x);
  const double k3x = s.theta_dot + 0.5 * h * k2v;
  const double k3v = accel(s.theta + 0.5 * h * k2x);
  const double k4x = s.theta_dot + h * k3v;
  const double k4v = accel(s.theta + h * k3x);

  return {s.theta + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
          s.theta_dot + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

namespace {

// Bisection on the sub-step length h in (0, dt] for which the RK4 image of
// `from` lands on the section. theta(h) is increasing on the bracketing step.
std::pair<StanceState, double> locate_section(const WheelParams& p, const StanceState& from,
                                              double dt, double target, double tol) {
  double lo = 0.0;
  double hi = dt;
  StanceState at_hi = rk4_step(p, from, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const StanceState at_mid = rk4_step(p, from, mid);
    const double err = at_mid.theta - target;
    if (std::abs(err) <= tol) return {at_mid, mid};
    if (err > 0.0) {
      hi = mid;
      at_hi = at_mid;
    } else {
      lo = mid;
    }
  }
  return {at_hi, hi};
}

void sample(GaitTrace& trace, const WheelParams& p, double t, const StanceState& s) {
  trace.samples.push_back({t, s.theta, s.theta_dot, nonlinear_energy(p, s)});
}

}  // namespace

StancePhaseResult integrate_stance(const WheelParams& p, const IntegratorConfig& cfg,
                                   const StanceState& start, double t0) {
  validate(cfg);
  const double target = p.theta_pre();
  const double slack = cfg.event_tol + 1e-9;
  if (!(start.theta >= p.theta_post() - slack && start.theta <= target + slack)) {
    std::ostringstream os;
    os << "stance start theta=" << start.theta << " outside [" << p.theta_post() << ", "
       << target << "]";
    throw std::invalid_argument(os.str());
  }

  StancePhaseResult out;
  const bool tracing = cfg.trace_stride > 0;
  if (tracing) sample(out.trace, p, t0, start);

  if (std::abs(start.theta - target) <= cfg.event_tol && start.theta_dot > 0.0) {
    out.end_state = start;
    return out;
  }

  StanceState s = start;
  double t = 0.0;
  long step = 0;
  while (true) {
    const StanceState next = rk4_step(p, s, cfg.dt);
    if (next.theta >= target - cfg.event_tol && next.theta_dot > 0.0) {
      const auto [hit, h] = locate_section(p, s, cfg.dt, target, cfg.event_tol);
      out.end_state = hit;
      out.duration = t + h;
      out.termination = Termination::Impact;
      if (tracing) sample(out.trace, p, t0 + out.duration, hit);
      return out;
    }
    s = next;
    t += cfg.dt;
    ++step;
    if (tracing && step % cfg.trace_stride == 0) sample(out.trace, p, t0 + t, s);

    if (s.theta_dot <= 0.0 && s.theta < 0.0) {
      out.termination = Termination::InsufficientEnergy;
    } else if (t > cfg.max_step_time) {
      out.termination = Termination::Timeout;
    } else {
      continue;
    }
    out.end_state = s;
    out.duration = t;
    if (tracing && step % cfg.trace_stride != 0) sample(out.trace, p, t0 + t, s);
    return out;
  }
}

StanceState collision_map(const WheelParams& p, const StanceState& pre, double tol) {
  if (!(std::abs(pre.theta - p.theta_pre()) <= tol)) {
    std::ostringstream os;
    os.precision(17);
    os << "collision_map: theta=" << pre.theta << " is not on the impact section "
       << p.theta_pre();
    throw std::domain_error(os.str());
  }
  if (!(pre.theta_dot > 0.0)) {
    throw std::domain_error("collision_map: pre-impact angular velocity must be positive");
  }
  return {p.theta_post(), std::cos(p.alpha()) * pre.theta_dot};
}

WalkResult walk(const WheelParams& p, const IntegratorConfig& cfg, const StanceState& start,
                int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("walk: n_steps must be at least 1");
  validate(cfg);
  if (std::abs(start.theta - p.theta_pre()) <= cfg.event_tol) {
    throw std::invalid_argument("walk: start lies on the impact section; apply collision_map first");
  }

  WalkResult out;
  StanceState s = start;
  double t = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    StancePhaseResult stance = integrate_stance(p, cfg, s, t);
    if (!stance.trace.empty()) {
      // Each stance trace repeats the previous post-impact sample; keep it so
      // the jump in theta across the impact shows as two rows at equal t.
      out.trace.samples.insert(out.trace.samples.end(), stance.trace.samples.begin(),
                               stance.trace.samples.end());
    }
    t += stance.duration;
    if (stance.termination != Termination::Impact) {
      out.termination = stance.termination;
      out.failure_state = stance.end_state;
      return out;
    }

    const StanceState pre = stance.end_state;
    const StanceState post = collision_map(p, pre, cfg.event_tol);
    StepRecord rec;
    rec.index = i + 1;
    rec.pre_impact = pre;
    rec.post_impact = post;
    rec.period = stance.duration;
    rec.kinetic_pre = kinetic_energy(p, pre.theta_dot);
    rec.kinetic_post = kinetic_energy(p, post.theta_dot);
    rec.energy_total_pre = nonlinear_energy(p, pre);
    rec.energy_total_post = nonlinear_energy(p, post);
    out.steps.push_back(rec);
    s = post;
  }
  return out;
}

}  // namespace rimwalk
