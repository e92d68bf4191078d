#include "rimwalk/linear_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rimwalk {

Eigen::Matrix2d LinearFlow::matrix() const {
  Eigen::Matrix2d m;
  m << cosh_wt, sinh_wt / omega, omega * sinh_wt, cosh_wt;
  return m;
}

LinearFlow linear_flow(const WheelParams& p, double t) {
  const double w = p.omega();
  return {w, t, std::cosh(w * t), std::sinh(w * t)};
}

StanceState linear_flow_apply(const WheelParams& p, double t, const StanceState& s) {
  if (!(t >= 0.0)) throw std::invalid_argument("linear_flow_apply: t must be non-negative");
  return linear_flow(p, t).apply(s);
}

Eigen::Matrix2d state_matrix(const WheelParams& p) {
  Eigen::Matrix2d a;
  a << 0.0, 1.0, p.omega() * p.omega(), 0.0;
  return a;
}

Eigen::Matrix2d energy_weight_matrix(const WheelParams& p) {
  Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
  w(0, 0) = -p.p_max();
  w(1, 1) = p.inertia();
  return w;
}

double linear_energy(const WheelParams& p, const StanceState& s) {
  return p.p_max() + 0.5 * (p.inertia() * s.theta_dot * s.theta_dot -
                            p.p_max() * s.theta * s.theta);
}

double linear_energy_margin(const WheelParams& p, const StanceState& s) {
  const double w = p.omega();
  return 0.5 * p.inertia() * (s.theta_dot * s.theta_dot - w * w * s.theta * s.theta);
}

namespace {

bool reaches_section(double theta0, double v0, double margin) {
  if (theta0 < 0.0) return v0 > 0.0 && margin > 0.0;
  if (theta0 == 0.0) return v0 > 0.0;
  // Past the apex the wheel always ends up rolling forward unless it is
  // heading back with enough energy to recross the apex.
  return v0 >= 0.0 || margin < 0.0;
}

}  // namespace

std::optional<double> linear_time_to_section(const WheelParams& p, const StanceState& s) {
  const double w = p.omega();
  const double target = p.theta_pre();
  const double theta0 = s.theta;
  const double v0 = s.theta_dot;
  if (!(theta0 < target)) {
    throw std::invalid_argument("linear_time_to_section: start must lie before the impact section");
  }

  double margin = v0 * v0 - w * w * theta0 * theta0;  // 2 (E - P_max) / (m l^2)
  // A margin within roundoff of zero is the barrier itself: the approach to
  // the apex takes unbounded time.
  if (std::abs(margin) <= 8.0 * std::numeric_limits<double>::epsilon() * (v0 * v0 + w * w * theta0 * theta0)) {
    margin = 0.0;
  }
  if (!reaches_section(theta0, v0, margin)) return std::nullopt;

  auto theta_at = [&](double t) {
    return std::cosh(w * t) * theta0 + std::sinh(w * t) / w * v0;
  };
  auto rate_at = [&](double t) { return w * std::sinh(w * t) * theta0 + std::cosh(w * t) * v0; };

  // Start of the increasing branch.
  double lo = 0.0;
  if (v0 < 0.0) lo = std::atanh(-v0 / (w * theta0)) / w;

  // Closed-form guess: the section velocity follows from energy
  // conservation, then [sinh; cosh] solve a 2x2 linear system.
  double guess = std::numeric_limits<double>::quiet_NaN();
  const double v_end = std::sqrt(margin + w * w * target * target);
  const double det = margin / w;
  if (std::abs(det) > 1e-300) {
    const double sh = (v0 * target - theta0 * v_end) / det;
    if (sh > 0.0) guess = std::asinh(sh) / w;
  }

  double hi = std::max(lo, 1.0 / w);
  for (int i = 0; theta_at(hi) < target; ++i) {
    if (i > 2000) return std::nullopt;
    lo = hi;
    hi *= 2.0;
  }

  double t = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = theta_at(t) - target;
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double df = rate_at(t);
    double next = t - f / df;
    if (!(df > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-14 * std::max(1.0, t) || hi - lo <= 1e-15 * std::max(1.0, t)) break;
  }
  return t;
}

ComPoint linear_com_position(const WheelParams& p, double theta) {
  if (!(std::abs(theta) <= 1.0)) {
    throw std::domain_error("linear_com_position: |theta| must not exceed 1");
  }
  const double root = std::sqrt(1.0 - theta * theta);
  return {0.5 * p.l() * (theta * root + std::asin(theta)),
          p.l() * (1.0 - 0.5 * theta * theta)};
}

ComPoint linear_com_velocity(const WheelParams& p, const StanceState& s) {
  if (!(std::abs(s.theta) <= 1.0)) {
    throw std::domain_error("linear_com_velocity: |theta| must not exceed 1");
  }
  return {p.l() * s.theta_dot * std::sqrt(1.0 - s.theta * s.theta),
          -p.l() * s.theta * s.theta_dot};
}

double linear_restored_energy(const WheelParams& p) {
  // 1/2 m g l [(alpha/2 + phi)^2 - (alpha/2 - phi)^2]
  return p.p_max() * p.alpha() * p.phi();
}

StanceState linear_steady_pre_impact_state(const WheelParams& p) {
  return {p.theta_pre(), p.omega() * std::sqrt(2.0 * p.alpha() * p.phi()) / std::sin(p.alpha())};
}

namespace {

void sample(GaitTrace& trace, const WheelParams& p, double t, const StanceState& s) {
  trace.samples.push_back({t, s.theta, s.theta_dot, linear_energy(p, s)});
}

}  // namespace

WalkResult linear_walk(const WheelParams& p, const StanceState& start, int n_steps,
                       double sample_dt) {
  if (n_steps < 1) throw std::invalid_argument("linear_walk: n_steps must be at least 1");
  if (std::abs(start.theta - p.theta_pre()) <= kSectionTol) {
    throw std::invalid_argument(
        "linear_walk: start lies on the impact section; apply collision_map first");
  }

  WalkResult out;
  StanceState s = start;
  double t0 = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    const std::optional<double> duration = linear_time_to_section(p, s);
    if (!duration) {
      out.termination = Termination::InsufficientEnergy;
      out.failure_state = s;
      if (sample_dt > 0.0) sample(out.trace, p, t0, s);
      return out;
    }
    if (sample_dt > 0.0) {
      for (long k = 0; static_cast<double>(k) * sample_dt < *duration; ++k) {
        const double dt = static_cast<double>(k) * sample_dt;
        sample(out.trace, p, t0 + dt, linear_flow(p, dt).apply(s));
      }
    }

    const StanceState pre = linear_flow(p, *duration).apply(s);
    const StanceState post = collision_map(p, pre);
    t0 += *duration;
    if (sample_dt > 0.0) sample(out.trace, p, t0, pre);

    StepRecord rec;
    rec.index = i + 1;
    rec.pre_impact = pre;
    rec.post_impact = post;
    rec.period = *duration;
    rec.kinetic_pre = kinetic_energy(p, pre.theta_dot);
    rec.kinetic_post = kinetic_energy(p, post.theta_dot);
    rec.energy_total_pre = linear_energy(p, pre);
    rec.energy_total_post = linear_energy(p, post);
    out.steps.push_back(rec);
    s = post;
  }
  return out;
}

}  // namespace rimwalk
