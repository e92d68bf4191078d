#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rimwalk/harness.hpp"

using namespace rimwalk;
using namespace rimwalk::harness;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentSpec sweep_spec(int na, int nphi) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Sweep;
  s.grid.alpha_res = na;
  s.grid.phi_res = nphi;
  return s;
}

}  // namespace

TEST(Validate, RejectsBadSpecs) {
  ExperimentSpec s;
  EXPECT_NO_THROW(validate(s));
  s.scale = 0.0;
  EXPECT_THROW(validate(s), SpecError);
  s = {};
  s.steps = 0;
  EXPECT_THROW(validate(s), SpecError);
  s = sweep_spec(1, 10);
  EXPECT_THROW(validate(s), SpecError);
  s = sweep_spec(10, 10);
  s.grid.phi_max = 0.1;  // below phi_min at the top of the alpha range
  EXPECT_THROW(validate(s), SpecError);
  s = {};
  s.params.alpha = 1.9;
  EXPECT_THROW(validate(s), std::invalid_argument);
}

TEST(Sweep, CellCountOrderAndEndpoints) {
  const auto cells = run_sweep(sweep_spec(20, 15));
  ASSERT_EQ(cells.size(), 300u);
  EXPECT_DOUBLE_EQ(cells.front().alpha, 0.01);
  EXPECT_DOUBLE_EQ(cells.back().alpha, kPi / 2 - 0.01);
  for (std::size_t i = 0; i < 20; ++i) {
    const SweepCell& first = cells[i * 15];
    const SweepCell& last = cells[i * 15 + 14];
    EXPECT_DOUBLE_EQ(first.phi, first.phi_min + 1e-4);
    EXPECT_EQ(last.phi, 1.0);
    EXPECT_EQ(first.alpha, last.alpha);
  }
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  const auto serial = run_sweep(sweep_spec(37, 23), 1);
  const auto parallel = run_sweep(sweep_spec(37, 23), 5);
  std::ostringstream a, b;
  write_sweep_csv(a, serial);
  write_sweep_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, PeriodFallsWithSlopeAndPeaksAtMinimum) {
  const auto cells = run_sweep(sweep_spec(40, 60));
  for (std::size_t i = 0; i < 40; ++i) {
    double max_t = -1.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < 60; ++j) {
      const SweepCell& c = cells[i * 60 + j];
      ASSERT_EQ(c.status, PeriodStatus::Finite);
      EXPECT_NEAR(c.eigenvalue, std::pow(std::cos(c.alpha), 2), 1e-12);
      if (j > 0) EXPECT_LT(*c.t_star, *cells[i * 60 + j - 1].t_star);
      if (*c.t_star > max_t) {
        max_t = *c.t_star;
        arg = j;
      }
    }
    EXPECT_EQ(arg, 0u);
  }
}

TEST(Sweep, MostOfTheWalkingRegionIsFast) {
  const auto cells = run_sweep(sweep_spec(100, 100));
  int region = 0, fast = 0;
  for (const SweepCell& c : cells) {
    if (c.phi <= c.phi_min + 0.01) continue;
    ++region;
    if (*c.t_star < 1.5) ++fast;
  }
  EXPECT_GT(region, 9000);
  EXPECT_GE(static_cast<double>(fast) / region, 0.99);
}

TEST(Compare, SmallAngleModelsAgree) {
  for (double alpha : {0.05, 0.1, 0.2, 0.3}) {
    ExperimentSpec s;
    s.kind = ExperimentKind::Compare;
    s.steps = 5;
    s.params.alpha = alpha;
    s.params.phi = 0.1;
    const CompareResult r = run_compare(s);
    ASSERT_EQ(r.termination, Termination::Impact);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.rows[0].quantity, "period");
    EXPECT_LT(std::abs(r.rows[0].rel_diff), 0.02) << alpha;
    EXPECT_NEAR(r.rows[3].nonlinear, std::pow(std::cos(alpha), 2), 1e-3);
    EXPECT_NEAR(r.rows[3].linear, std::pow(std::cos(alpha), 2), 1e-6);
  }
}

TEST(Compare, RequiresLinearGait) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Compare;
  s.params.alpha = 1.2;
  s.params.phi = 0.05;
  EXPECT_THROW(run_compare(s), SpecError);
}

TEST(Converge, FittedRatesMatchCosines) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Converge;
  s.scale = 1.2;
  s.steps = 40;
  const double c = std::cos(s.params.alpha);

  const ConvergenceTable lin = run_convergence(s, Model::Linear);
  EXPECT_EQ(lin.termination, Termination::Impact);
  EXPECT_EQ(lin.rows.size(), 41u);
  EXPECT_NEAR(lin.fit.rate_collision, c, 1e-6);
  EXPECT_NEAR(lin.fit.rate_stance, c, 1e-6);
  EXPECT_NEAR(lin.fit.rate_step, c * c, 1e-6);

  const ConvergenceTable nl = run_convergence(s, Model::Nonlinear);
  EXPECT_EQ(nl.termination, Termination::Impact);
  EXPECT_NEAR(nl.fit.rate_collision, c, 1e-6);
  EXPECT_NEAR(nl.fit.rate_step, c * c, 1e-3);

  s.scale = 1.0;
  EXPECT_THROW(run_convergence(s, Model::Linear), SpecError);
}

TEST(Converge, ErrorsShrinkMonotonically) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Converge;
  s.scale = 0.9;
  s.steps = 15;
  const ConvergenceTable t = run_convergence(s, Model::Nonlinear);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i].err_pre, t.rows[i - 1].err_pre);
}

TEST(Simulate, TracesCoverAllSteps) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Simulate;
  s.steps = 4;
  s.scale = 1.1;
  const SimulationResult r = run_simulation(s);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.nonlinear.steps.size(), 4u);
  EXPECT_EQ(r.linear.steps.size(), 4u);
  EXPECT_GT(r.nonlinear.trace.size(), 10u);
  EXPECT_GT(r.linear.trace.size(), 10u);
}

TEST(WriteFile, ReportsUnwritablePath) {
  EXPECT_THROW(write_file("/nonexistent-dir/x.csv", [](std::ostream&) {}), IoError);
}
