#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rimwalk/cli.hpp"

namespace fs = std::filesystem;
using rimwalk::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rimwalk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rimwalk-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, ReportSucceeds) {
  const Outcome o = invoke({"report", "--alpha", "0.7853981633974483", "--phi", "0.1"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("0.74031180"), std::string::npos);
}

TEST(Cli, InvalidSpecExitsTwo) {
  EXPECT_EQ(invoke({"report", "--alpha", "1.9"}).code, 2);
  EXPECT_EQ(invoke({"report", "--phi", "-0.1"}).code, 2);
  EXPECT_EQ(invoke({"report", "--alpha", "abc"}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"converge", "--scale", "1"}).code, 2);
  EXPECT_EQ(invoke({"compare", "--alpha", "1.2", "--phi", "0.05"}).code, 2);
}

TEST(Cli, GaitFailureExitsThree) {
  const Outcome o = invoke({"simulate", "--scale", "0.3", "--steps", "3"});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("InsufficientEnergy"), std::string::npos);
}

TEST(Cli, UnwritableOutputExitsFour) {
  EXPECT_EQ(invoke({"sweep", "--alpha-res", "3", "--phi-res", "3", "--out",
                    "/nonexistent-dir/sweep.csv"}).code,
            4);
}

TEST(Cli, WarnsOutsideLinearizationRange) {
  const Outcome o = invoke({"report", "--alpha", "1.5", "--phi", "0.5"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.err.find("warning"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const fs::path cfg = scratch("params.ini");
  {
    std::ofstream f(cfg);
    f << "alpha = 0.5\nphi = 0.2\n";
  }
  const Outcome from_file = invoke({"report", "--config", cfg.string()});
  const Outcome direct = invoke({"report", "--alpha", "0.5", "--phi", "0.2"});
  ASSERT_EQ(from_file.code, 0);
  EXPECT_EQ(from_file.out, direct.out);

  const Outcome overridden = invoke({"report", "--config", cfg.string(), "--phi", "0.3"});
  EXPECT_EQ(overridden.out, invoke({"report", "--alpha", "0.5", "--phi", "0.3"}).out);

  {
    std::ofstream f(cfg);
    f << "alpah = 0.5\n";
  }
  EXPECT_EQ(invoke({"report", "--config", cfg.string()}).code, 2);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const char* cmd : {"sweep", "converge", "compare"}) {
    std::vector<std::string> args{cmd, "--alpha-res", "8", "--phi-res", "8", "--scale", "1.1",
                                  "--steps", "6"};
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    ASSERT_EQ(a.code, 0) << cmd << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}

TEST(Cli, SimulateWritesBothTraces) {
  const fs::path prefix = scratch("sim");
  const Outcome o = invoke({"simulate", "--steps", "3", "--out", prefix.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string nl = slurp(prefix.string() + "_nonlinear.csv");
  const std::string li = slurp(prefix.string() + "_linear.csv");
  EXPECT_EQ(nl.rfind("t,theta,theta_dot,E_nonlinear\n", 0), 0u);
  EXPECT_EQ(li.rfind("t,theta,theta_dot,E_linear,xc_bar,zc_bar\n", 0), 0u);
}

TEST(Cli, ConvergeWritesTableAndFit) {
  const fs::path prefix = scratch("conv");
  const Outcome o = invoke({"converge", "--scale", "1.2", "--model", "linear", "--out",
                            prefix.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string fit = slurp(prefix.string() + "_fit.csv");
  EXPECT_EQ(fit.rfind("model,rate_collision,rate_stance,rate_step,cos_alpha,cos2_alpha\nlinear,", 0),
            0u);
}

TEST(Cli, InstalledBinaryRuns) {
  const std::string cmd = std::string(RIMWALK_TOOL_PATH) + " report > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}
