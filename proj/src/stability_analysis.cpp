#include "rimwalk/stability_analysis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rimwalk/gait_trace.hpp"
#include "rimwalk/linear_dynamics.hpp"
#include "rimwalk/nonlinear_dynamics.hpp"

namespace rimwalk {

FixedPoint fixed_point_energy(const WheelParams& p) {
  const StanceState pre = steady_pre_impact_state(p);
  return {kinetic_energy(p, pre.theta_dot), pre.theta_dot, std::cos(p.alpha()) * pre.theta_dot};
}

std::vector<double> kinetic_energy_recurrence(const WheelParams& p, double k0, int n) {
  if (n < 0) throw std::invalid_argument("kinetic_energy_recurrence: n must be non-negative");
  const double eps = energy_loss_coefficient(p);
  const double de = restored_energy(p);
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(n) + 1);
  k.push_back(k0);
  for (int i = 0; i < n; ++i) k.push_back(eps * k.back() + de);
  return k;
}

double period_function_value(double alpha, double phi) {
  const double c = std::cos(alpha);
  return 2.0 * std::sin(alpha) * std::sqrt(2.0 * alpha * phi) /
         (alpha * (1.0 - c) + 2.0 * phi * (1.0 + c));
}

double period_function_dphi(double alpha, double phi) {
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  const double num = 2.0 * s * std::sqrt(2.0 * alpha * phi);
  const double dnum = s * std::sqrt(2.0 * alpha / phi);
  const double den = alpha * (1.0 - c) + 2.0 * phi * (1.0 + c);
  const double dden = 2.0 * (1.0 + c);
  return (dnum * den - num * dden) / (den * den);
}

double phi_min(double alpha) {
  const double t = std::tan(0.5 * alpha);
  return 0.5 * alpha * t * t;
}

double phi_min_numeric(double alpha, double phi_hi) {
  double lo = 0.0;
  double hi = phi_hi;
  if (!(period_function_dphi(alpha, hi) < 0.0)) {
    throw std::domain_error("phi_min_numeric: F still increasing at the upper bracket");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (period_function_dphi(alpha, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

const char* to_string(PeriodStatus s) {
  switch (s) {
    case PeriodStatus::Finite:
      return "finite";
    case PeriodStatus::BelowMin:
      return "below-min";
    case PeriodStatus::Diverging:
      return "diverged";
  }
  return "?";
}

double atanh_log(double x) { return 0.5 * std::log((1.0 + x) / (1.0 - x)); }

PeriodFunction period_function(double alpha, double phi, double omega) {
  PeriodFunction out;
  out.f_value = period_function_value(alpha, phi);
  out.phi_min = phi_min(alpha);
  if (phi < out.phi_min) {
    out.status = PeriodStatus::BelowMin;
  } else if (phi == out.phi_min || !(1.0 - out.f_value > kDivergenceGap)) {
    out.status = PeriodStatus::Diverging;
  } else {
    out.status = PeriodStatus::Finite;
    out.t_star = atanh_log(out.f_value) / omega;
  }
  return out;
}

PeriodFunction period_function(const WheelParams& p) {
  return period_function(p.alpha(), p.phi(), p.omega());
}

TransitionFactors transition_factors(const WheelParams& p) {
  const PeriodFunction pf = period_function(p);
  if (pf.status != PeriodStatus::Finite) {
    throw std::domain_error(std::string("transition_factors: no steady linearized gait (") +
                            to_string(pf.status) + ")");
  }
  const StanceState pre = linear_steady_pre_impact_state(p);
  const StanceState post = collision_map(p, pre);
  if (!(pre.theta_dot > 0.0)) {
    throw std::domain_error("transition_factors: steady pre-impact velocity must be positive");
  }

  const double w = p.omega();
  const LinearFlow flow = linear_flow(p, *pf.t_star);

  TransitionFactors out;
  out.t_star = *pf.t_star;
  out.r_bar = std::cos(p.alpha());
  out.q_bar_exact = flow.cosh_wt - pre.theta * w / pre.theta_dot * flow.sinh_wt;
  out.q_bar_simple = post.theta_dot / pre.theta_dot;
  out.energy_margin_ratio = linear_energy_margin(p, pre) / linear_energy_margin(p, post);
  out.q_bar_energy = out.q_bar_simple * out.energy_margin_ratio;

  // Q = (I - A x- p / (p A x-)) e^{AT*},  p = [1 0].
  const Eigen::Vector2d x_pre(pre.theta, pre.theta_dot);
  const Eigen::Vector2d a_x = state_matrix(p) * x_pre;
  const Eigen::RowVector2d proj(1.0, 0.0);
  const double p_a_x = proj * a_x;
  const Eigen::Matrix2d phi_t = flow.matrix();
  out.q_matrix = (Eigen::Matrix2d::Identity() - a_x * proj / p_a_x) * phi_t;
  out.q_bar_matrix = out.q_matrix(1, 1);

  const Eigen::Vector2d unit_rate(0.0, 1.0);
  out.period_gain = -(proj * phi_t * unit_rate).value() / p_a_x;
  return out;
}

double energy_margin_ratio(const WheelParams& p) {
  const StanceState pre = linear_steady_pre_impact_state(p);
  const StanceState post = collision_map(p, pre);
  return linear_energy_margin(p, pre) / linear_energy_margin(p, post);
}

double poincare_eigenvalue(const WheelParams& p) {
  const StanceState pre = linear_steady_pre_impact_state(p);
  const StanceState post = collision_map(p, pre);
  const double q_bar = post.theta_dot / pre.theta_dot;
  const double r_bar = std::cos(p.alpha());
  return q_bar * r_bar;
}

StabilityReport stability_report(const WheelParams& p) {
  StabilityReport r;
  r.alpha = p.alpha();
  r.phi = p.phi();
  r.epsilon = energy_loss_coefficient(p);
  r.delta_e = restored_energy(p);
  const FixedPoint fp = fixed_point_energy(p);
  r.k_eq = fp.k_eq;
  r.theta_dot_eq_pre = fp.theta_dot_pre;
  r.theta_dot_eq_post = fp.theta_dot_post;
  r.q_bar = fp.theta_dot_post / fp.theta_dot_pre;
  r.r_bar = std::cos(p.alpha());
  r.poincare_eigenvalue = poincare_eigenvalue(p);
  const PeriodFunction pf = period_function(p);
  r.phi_min = pf.phi_min;
  r.t_star_status = pf.status;
  r.t_star = pf.t_star;
  if (!p.linearization_in_range()) {
    r.warning = "alpha/2 + phi exceeds 1 rad; linearized quantities are outside their effective range";
  }
  return r;
}

std::string report_csv_header() {
  return "alpha,phi,epsilon,delta_e,k_eq,q_bar,r_bar,eigenvalue,phi_min,t_star";
}

std::string report_csv_row(const StabilityReport& r) {
  std::string row;
  for (double v : {r.alpha, r.phi, r.epsilon, r.delta_e, r.k_eq, r.q_bar, r.r_bar,
                   r.poincare_eigenvalue, r.phi_min}) {
    row += format_number(v);
    row += ',';
  }
  row += r.t_star ? format_number(*r.t_star) : std::string(to_string(r.t_star_status));
  return row;
}

StabilityReport parse_report_csv_row(const std::string& row) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(row);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!row.empty() && row.back() == ',') fields.emplace_back();
  if (fields.size() != 10) {
    throw std::invalid_argument("report row: expected 10 fields, got " +
                                std::to_string(fields.size()));
  }

  std::vector<double> v;
  for (std::size_t i = 0; i < 9; ++i) {
    const auto x = parse_number(fields[i]);
    if (!x) throw std::invalid_argument("report row: bad number '" + fields[i] + "'");
    v.push_back(*x);
  }
  StabilityReport r;
  r.alpha = v[0];
  r.phi = v[1];
  r.epsilon = v[2];
  r.delta_e = v[3];
  r.k_eq = v[4];
  r.q_bar = v[5];
  r.r_bar = v[6];
  r.poincare_eigenvalue = v[7];
  r.phi_min = v[8];
  const std::string& t = fields[9];
  if (t == to_string(PeriodStatus::BelowMin)) {
    r.t_star_status = PeriodStatus::BelowMin;
  } else if (t == to_string(PeriodStatus::Diverging)) {
    r.t_star_status = PeriodStatus::Diverging;
  } else if (const auto x = parse_number(t)) {
    r.t_star_status = PeriodStatus::Finite;
    r.t_star = *x;
  } else {
    throw std::invalid_argument("report row: bad t_star '" + t + "'");
  }
  return r;
}

std::string report_text(const StabilityReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "rimless wheel stability report\n"
     << "  alpha                 " << r.alpha << " rad\n"
     << "  phi                   " << r.phi << " rad\n"
     << "  epsilon = cos^2 alpha " << r.epsilon << "\n"
     << "  restored energy dE    " << r.delta_e << " J\n"
     << "  steady K_eq-          " << r.k_eq << " J\n"
     << "  steady theta_dot-     " << r.theta_dot_eq_pre << " rad/s\n"
     << "  steady theta_dot+     " << r.theta_dot_eq_post << " rad/s\n"
     << "  stance factor Q       " << r.q_bar << "\n"
     << "  collision factor R    " << r.r_bar << "\n"
     << "  eigenvalue Q R        " << r.poincare_eigenvalue << "\n"
     << "  phi_min               " << r.phi_min << " rad\n"
     << "  steady period T*      ";
  if (r.t_star) {
    os << *r.t_star << " s\n";
  } else {
    os << to_string(r.t_star_status) << "\n";
  }
  if (r.warning) os << "  warning: " << *r.warning << "\n";
  return os.str();
}

}  // namespace rimwalk
