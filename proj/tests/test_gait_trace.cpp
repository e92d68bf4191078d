#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "rimwalk/gait_trace.hpp"

using namespace rimwalk;

TEST(FormatNumber, RoundTripsRandomBitPatterns) {
  oracle::Rng rng(41);
  std::uniform_int_distribution<std::uint64_t> bits;
  int finite = 0;
  while (finite < 5000) {
    const std::uint64_t b = bits(rng.gen);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const auto back = parse_number(format_number(x));
    ASSERT_TRUE(back.has_value()) << format_number(x);
    EXPECT_EQ(*back, x);
    ++finite;
  }
}

TEST(FormatNumber, NonFinite) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(parse_number("nan").value()));
}

TEST(ParseNumber, Strict) {
  EXPECT_FALSE(parse_number("").has_value());
  EXPECT_FALSE(parse_number("1.0x").has_value());
  EXPECT_FALSE(parse_number(" 1").has_value());
  EXPECT_EQ(parse_number("-2.5e-3").value(), -2.5e-3);
}

TEST(TraceCsv, LinearMarksUndefinedCom) {
  const WheelParams p = make_params({1, 1, 9.81, 0.5, 0.1});
  GaitTrace tr;
  tr.samples.push_back({0.0, 0.5, 1.0, 9.0});
  tr.samples.push_back({0.1, 1.5, 1.0, 9.0});
  std::ostringstream os;
  write_linear_trace_csv(os, p, tr);
  std::istringstream is(os.str());
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  EXPECT_EQ(header, "t,theta,theta_dot,E_linear,xc_bar,zc_bar");
  EXPECT_EQ(row0.find("nan"), std::string::npos);
  EXPECT_EQ(row1.substr(row1.size() - 8), ",nan,nan");
}

TEST(TraceCsv, NonlinearHeaderAndRows) {
  GaitTrace tr;
  tr.samples.push_back({0.25, -0.1, 2.0, 10.5});
  std::ostringstream os;
  write_nonlinear_trace_csv(os, tr);
  EXPECT_EQ(os.str(), "t,theta,theta_dot,E_nonlinear\n0.25,-0.1,2,10.5\n");
}
