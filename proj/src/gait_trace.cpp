#include "rimwalk/gait_trace.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "rimwalk/linear_dynamics.hpp"

namespace rimwalk {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view field) {
  if (field == "nan") return std::nan("");
  if (field == "inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

void write_nonlinear_trace_csv(std::ostream& os, const GaitTrace& trace) {
  os << "t,theta,theta_dot,E_nonlinear\n";
  for (const TraceSample& s : trace.samples) {
    os << format_number(s.t) << ',' << format_number(s.theta) << ','
       << format_number(s.theta_dot) << ',' << format_number(s.energy) << '\n';
  }
}

void write_linear_trace_csv(std::ostream& os, const WheelParams& p, const GaitTrace& trace) {
  os << "t,theta,theta_dot,E_linear,xc_bar,zc_bar\n";
  for (const TraceSample& s : trace.samples) {
    os << format_number(s.t) << ',' << format_number(s.theta) << ','
       << format_number(s.theta_dot) << ',' << format_number(s.energy) << ',';
    if (std::abs(s.theta) <= 1.0) {
      const ComPoint c = linear_com_position(p, s.theta);
      os << format_number(c.x) << ',' << format_number(c.z);
    } else {
      os << "nan,nan";
    }
    os << '\n';
  }
}

}  // namespace rimwalk
