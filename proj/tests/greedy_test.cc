// Copyright 2026 The SmartCrowd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smartcrowd/greedy.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "test_util.h"

namespace smartcrowd {
namespace {

constexpr double kEps = 1e-9;

TEST(OfflineGreedyTest, ExampleTraceIsFrozen) {
  const GreedyResult r = OfflineGreedyDesign(ExampleInstance());
  const std::vector<std::pair<WorkerId, TaskId>> expected = {
      {5, 2}, {4, 2}, {3, 2}, {1, 2}, {0, 2},
      {2, 2}, {5, 1}, {4, 1}, {1, 1}, {0, 1}};
  ASSERT_EQ(r.trace.steps.size(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(r.trace.steps[i].worker, expected[i].first) << "step " << i;
    EXPECT_EQ(r.trace.steps[i].task, expected[i].second) << "step " << i;
  }
  EXPECT_TRUE(r.trace.steps[0].toward_threshold);
  EXPECT_NEAR(r.trace.steps[2].gain, 0.7725, kEps);
  EXPECT_NEAR(r.trace.steps.back().running_value, 1.5305681818181818, kEps);
  EXPECT_NEAR(GlobalValue(r.state, ExampleInstance()), 1.5305681818181818, kEps);
  EXPECT_EQ(r.trace.pair_evaluations, 42);
  EXPECT_EQ(r.trace.stop_reasons,
            (std::vector<StopReason>{StopReason::kUnreachable,
                                     StopReason::kNoPositiveGain,
                                     StopReason::kNoCandidates}));
  EXPECT_TRUE(r.state.workers_of(0).empty());
  EXPECT_TRUE(r.trace.below_minimum.empty());
}

TEST(OfflineGreedyTest, NeverBeatsTheExhaustiveOptimum) {
  for (unsigned seed = 0; seed < 60; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 2 + seed % 4;
    o.tasks = 1 + seed % 3;
    const Instance instance = testing::RandomInstance(seed, o);
    const GreedyResult r = OfflineGreedyDesign(instance);
    const testing::BruteForceResult oracle = testing::BruteForceDesign(instance);
    EXPECT_LE(GlobalValue(r.state, instance), oracle.best + kEps) << "seed " << seed;
    for (const ConstraintViolation& v : CheckConstraints(r.state, instance)) {
      EXPECT_NE(v.kind, ConstraintViolation::Kind::kTooManyTasks);
      EXPECT_NE(v.kind, ConstraintViolation::Kind::kUnavailableWorker);
    }
  }
}

TEST(OfflineGreedyTest, ZeroThresholdGainsAreNonIncreasingAndCachedOnce) {
  for (unsigned seed = 0; seed < 50; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 3 + seed % 6;
    o.tasks = 1 + seed % 3;
    o.x_high = 1 + seed % 3;
    o.threshold_scale = 0.0;
    const Instance instance = testing::RandomInstance(seed, o);
    const GreedyResult r = OfflineGreedyDesign(instance);
    for (size_t i = 1; i < r.trace.steps.size(); ++i) {
      EXPECT_LE(r.trace.steps[i].gain, r.trace.steps[i - 1].gain + kEps)
          << "seed " << seed << " step " << i;
    }
    EXPECT_LE(r.trace.pair_evaluations,
              static_cast<std::int64_t>(o.workers) * o.tasks)
        << "seed " << seed;
  }
}

TEST(OfflineGreedyTest, OptimalWhenNoBudgetBinds) {
  for (unsigned seed = 0; seed < 30; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 2 + seed % 4;
    o.tasks = 1 + seed % 3;
    o.threshold_scale = 0.0;
    o.w1 = 1.0;
    Instance instance = testing::RandomInstance(seed, o);
    for (TaskSpec& t : instance.workload.tasks) t.max_cost = 100.0;
    const GreedyResult r = OfflineGreedyDesign(instance);
    EXPECT_NEAR(GlobalValue(r.state, instance),
                testing::BruteForceDesign(instance).best, kEps)
        << "seed " << seed;
  }
}

// Modular value under a knapsack budget: the largest single gain blocks two
// smaller workers that together are worth almost twice as much.
TEST(OfflineGreedyTest, BudgetedArgmaxCanFallBelowOneMinusInverseE) {
  Instance instance;
  instance.workload.skill_count = 1;
  instance.workload.tasks = {{0, {0.0}, 1.0}};
  instance.workers = {{0, {0.51}, 0.51, 1.0}, {1, {0.5}, 0.5, 1.0},
                      {2, {0.5}, 0.5, 1.0}};
  instance.constraints = {0, 1};
  instance.weights = {1.0, 0.0};
  const GreedyResult r = OfflineGreedyDesign(instance);
  const double optimum = testing::BruteForceDesign(instance).best;
  EXPECT_NEAR(optimum, 1.0, kEps);
  EXPECT_NEAR(GlobalValue(r.state, instance), 0.51, kEps);
  EXPECT_EQ(r.trace.stop_reasons[0], StopReason::kBudget);
}

TEST(MarginalGainTest, MatchesValueDifference) {
  const Instance instance = ExampleInstance();
  AssignmentState state(6, 3);
  state.Assign(5, 2);
  state.Assign(4, 2);
  RefreshIndexes(state, instance);
  EXPECT_NEAR(MarginalGain(state, instance, 3, 2), 0.7725, kEps);
  EXPECT_NEAR(MarginalGain(state, instance, 0, 0), 0.0, kEps);
}

TEST(OnlineGreedyReplaceTest, RespectsPoolAndNonPreemption) {
  const Instance instance = ExampleInstance();
  AssignmentState state = OfflineGreedyDesign(instance).state;
  const AssignmentState before = state;
  const std::vector<WorkerId> decliners = {4};
  const std::vector<WorkerId> pool = {2, 3};
  const GreedyTrace trace =
      OnlineGreedyReplace(state, instance, 1, decliners, pool);
  EXPECT_FALSE(state.contains(1, 4));
  std::vector<std::pair<WorkerId, TaskId>> released = {{4, 1}};
  EXPECT_TRUE(CheckNonPreemption(before, state, released).empty());
  for (const GreedyStep& step : trace.steps) {
    EXPECT_EQ(step.task, 1);
    EXPECT_TRUE(step.worker == 2 || step.worker == 3);
  }
  for (WorkerId u = 0; u < 6; ++u) EXPECT_LE(state.load(u), 2);
}

TEST(GreedyMaintenanceTest, AddDeleteUpdateKeepLoadsAndAvailability) {
  Instance instance = ExampleInstance();
  AssignmentState state = OfflineGreedyDesign(instance).state;
  instance.workers.push_back({6, {0.9}, 0.1, 0.9});
  const std::vector<WorkerId> added = {6};
  GreedyAddWorkers(state, instance, added);
  EXPECT_GE(state.load(6), 1);

  AssignmentState before = state;
  const std::vector<WorkerId> deleted = {5};
  GreedyDeleteWorkers(state, instance, deleted);
  EXPECT_FALSE(state.available(5));
  EXPECT_EQ(state.load(5), 0);

  instance.workers[3].skills = {0.05};
  const std::vector<WorkerId> updated = {3};
  const GreedyTrace trace = GreedyUpdateWorkers(state, instance, updated);
  EXPECT_TRUE(trace.below_minimum.empty());
  EXPECT_GE(state.load(3), 1);
  for (WorkerId u = 0; u < instance.worker_count(); ++u) {
    EXPECT_LE(state.load(u), instance.constraints.tasks_per_worker_max);
  }
  for (TaskId t = 0; t < 3; ++t) {
    EXPECT_NEAR(state.index(t).value,
                TaskValue(state.workers_of(t), instance.workload.tasks[t],
                          instance.workers, instance.weights)
                    .value,
                kEps);
  }
}

TEST(WriteTraceCsvTest, HeaderAndRows) {
  const GreedyResult r = OfflineGreedyDesign(ExampleInstance());
  std::ostringstream out;
  WriteTraceCsv(r.trace, out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("step,worker,task,gain,running_value\n", 0), 0u);
  EXPECT_NE(csv.find("3,3,2,0.772500000,0.772500000\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

}  // namespace
}  // namespace smartcrowd
