// Sampled trajectories and their CSV export.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rimwalk/wheel_model.hpp"

namespace rimwalk {

struct TraceSample {
  double t = 0.0;  // time since the start of the walk (s)
  double theta = 0.0;
  double theta_dot = 0.0;
  double energy = 0.0;  // model-specific total mechanical energy (J)
};

struct GaitTrace {
  std::vector<TraceSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

/// Shortest decimal form that parses back to the same double. Locale
/// independent; non-finite values print as nan / inf / -inf.
std::string format_number(double value);

/// Strict parse of a full field; nullopt on any trailing garbage.
std::optional<double> parse_number(std::string_view field);

/// Header `t,theta,theta_dot,E_nonlinear`.
void write_nonlinear_trace_csv(std::ostream& os, const GaitTrace& trace);

/// Header `t,theta,theta_dot,E_linear,xc_bar,zc_bar`. The CoM columns are
/// `nan` where |theta| > 1 and the linearized arc is undefined.
void write_linear_trace_csv(std::ostream& os, const WheelParams& p, const GaitTrace& trace);

}  // namespace rimwalk
