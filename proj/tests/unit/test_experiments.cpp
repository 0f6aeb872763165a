#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvevp/experiments.hpp"
#include "support.hpp"

using namespace kvevp;
using kvevp::testing::small_config;

namespace {

Config steady_config() {
  Config c = small_config();
  c.forcing = ForcingSpec{};
  c.initial.velocity = FieldSpec{};
  c.initial.stress = FieldSpec{};
  c.initial.stress.kind = FieldSpec::Kind::steady;
  return c;
}

Config tiny_config() {
  Config c = small_config();
  c.run.modes = 4;
  c.run.points = 16;
  c.run.t_final = 0.1;
  c.initial.velocity = FieldSpec::random(0.2, 4);
  c.initial.stress = FieldSpec::random(0.5, 4);
  return c;
}

}  // namespace

TEST(Experiments, Defaults) {
  EXPECT_EQ(experiments::default_epsilons(), (std::vector<double>{0.1, 0.05, 0.025, 0.0125}));
  EXPECT_EQ(experiments::default_betas(), (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_EQ(experiments::default_modes(), (std::vector<int>{16, 24, 32, 48}));
  EXPECT_EQ(experiments::default_scales(), (std::vector<double>{1e-2, 1e-3, 1e-4}));
}

TEST(Experiments, BadParameterListsThrow) {
  const Config c = tiny_config();
  EXPECT_THROW(experiments::sweep_epsilon(c, {}), std::invalid_argument);
  EXPECT_THROW(experiments::sweep_epsilon(c, {0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(experiments::sweep_epsilon(c, {0.1, 0.0}), std::invalid_argument);
  EXPECT_THROW(experiments::sweep_beta_delta(c, {0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(experiments::sweep_beta_delta(c, {0.1, -0.1}), std::invalid_argument);
  EXPECT_THROW(experiments::sweep_resolution(c, {8, 4}), std::invalid_argument);
  EXPECT_THROW(experiments::twin_run(c, {1e-3, 1e-2}), std::invalid_argument);
  EXPECT_THROW(experiments::temporal_order_study(c, {0.01, 0.005}), std::invalid_argument);
  EXPECT_THROW(experiments::temporal_order_study(c, {0.01, 0.004, 0.002}), std::invalid_argument);
  EXPECT_THROW(experiments::temporal_order_study(c, {0.03, 0.015, 0.0075}), std::invalid_argument);
}

TEST(Experiments, SteadyStateSweepsHaveZeroDifferences) {
  const Config c = steady_config();
  for (const auto& r : {experiments::sweep_epsilon(c, {0.1, 0.05, 0.025}),
                        experiments::sweep_resolution(c, {4, 6, 8})}) {
    ASSERT_EQ(r.diff.size(), r.parameters.size() - 1);
    for (double d : r.diff) EXPECT_LE(d, 1e-14);
    EXPECT_TRUE(r.passed()) << r.kind;
  }
}

TEST(Experiments, EpsilonSweepShape) {
  const auto r = experiments::sweep_epsilon(tiny_config(), {0.1, 0.05, 0.025});
  EXPECT_EQ(r.kind, "epsilon");
  ASSERT_EQ(r.runs.size(), 3u);
  EXPECT_EQ(r.diff.size(), 2u);
  EXPECT_EQ(r.rates.size(), 1u);
  for (std::size_t j = 0; j < r.diff.size(); ++j) EXPECT_DOUBLE_EQ(r.diff[j], r.diff_u[j] + r.diff_sigma[j]);
  // Every constituent run shares one step.
  for (const auto& run : r.runs) EXPECT_EQ(run.dt, r.runs.front().dt);
  EXPECT_TRUE(r.runs.front().energy_checked);
  EXPECT_GT(r.diff[0], r.diff[1]);
}

TEST(Experiments, BetaDeltaSweepComparesToTarget) {
  const auto r = experiments::sweep_beta_delta(tiny_config(), {0.2, 0.1, 0.05});
  ASSERT_EQ(r.target_diff.size(), 3u);
  ASSERT_EQ(r.target_ic_diff.size(), 3u);
  EXPECT_GT(r.target_diff[0], r.target_diff[2]);
  EXPECT_GT(r.target_ic_diff[0], r.target_ic_diff[2]);
}

TEST(Experiments, TwinRunZeroScaleHasZeroMetric) {
  Config c = tiny_config();
  const auto rep = experiments::twin_run(c, {1e-2, 1e-3, 0.0});
  ASSERT_EQ(rep.metric.size(), 3u);
  for (double m : rep.metric[2]) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(rep.metric[0].size(), rep.times.size());
  EXPECT_EQ(rep.metric[0].front() > 0.0, true);
  ASSERT_GE(rep.terminal_ratios.size(), 1u);
  EXPECT_NEAR(rep.terminal_ratios[0], 10.0, 1.5);
}

TEST(Experiments, TwinRunDefaultScalesPass) {
  const auto rep = experiments::twin_run(tiny_config(), experiments::default_scales());
  EXPECT_TRUE(rep.passed());
  for (double r : rep.terminal_ratios) EXPECT_NEAR(r, 10.0, 1.5);
}

TEST(Experiments, TemporalOrderIsFour) {
  Config c = small_config();
  c.run.t_final = 1.0;
  c.regularization.epsilon = 0.1;
  const auto rep = experiments::temporal_order_study(c, {});
  ASSERT_EQ(rep.dts.size(), 3u);
  EXPECT_DOUBLE_EQ(rep.dts[1], rep.dts[0] / 2);
  ASSERT_EQ(rep.orders.size(), 1u);
  EXPECT_NEAR(rep.orders[0], 4.0, 0.2);
}

TEST(Experiments, CsvAndSummaryOutput) {
  const auto r = experiments::sweep_epsilon(steady_config(), {0.1, 0.05});
  std::ostringstream csv;
  experiments::write_csv(csv, r);
  const auto text = csv.str();
  EXPECT_NE(text.find("epsilon"), std::string::npos);
  EXPECT_GE(std::count(text.begin(), text.end(), '\n'), 3);

  std::ostringstream sum;
  experiments::write_summary(sum, "title", {{"a", true, 1.0, 2.0}, {"b", false, 3.0, 2.0}});
  EXPECT_NE(sum.str().find("[PASS] a"), std::string::npos);
  EXPECT_NE(sum.str().find("[FAIL] b"), std::string::npos);
  EXPECT_FALSE(experiments::all_passed({{"a", true, 0, 0}, {"b", false, 0, 0}}));
  EXPECT_TRUE(experiments::all_passed({}));
}
