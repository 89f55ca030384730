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

#include "smartcrowd/exact.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "test_util.h"

namespace smartcrowd {
namespace {

constexpr double kEps = 1e-9;
constexpr double kExampleOptimum = 1.9726599326599326;

using testing::FreePairs;
using testing::FrozenFullProgram;
using testing::UntouchedValue;
using testing::WithoutRemovals;

AssignmentState SolveExample(const Instance& instance) {
  const AssignmentProgram program = BuildDesignProgram(instance);
  const SolveResult result = Solve(program);
  EXPECT_EQ(result.status, SolveStatus::kOptimal);
  return StateFromSolution(program, result, instance);
}


TEST(DesignProgramTest, ExampleHasEighteenBooleanVariables) {
  const AssignmentProgram program = BuildDesignProgram(ExampleInstance());
  EXPECT_EQ(program.variable_count(), 18);
  EXPECT_EQ(program.free_variable_count(), 18);
  for (const ProgramVariable& var : program.variables) EXPECT_EQ(var.upper, 1);
  for (const ProgramColumn& col : program.columns) {
    EXPECT_EQ(col.min_total, 1);
    EXPECT_EQ(col.max_total, 2);
  }
}

TEST(DesignProgramTest, LowerBoundAboveTaskCountIsInfeasible) {
  Instance instance = ExampleInstance();
  instance.constraints = {4, 4};
  EXPECT_THROW(BuildDesignProgram(instance), InfeasibleProgram);
}

TEST(SolveTest, ExampleOptimumMatchesEnumeration) {
  const Instance instance = ExampleInstance();
  const testing::BruteForceResult oracle = testing::BruteForceDesign(instance);
  EXPECT_NEAR(oracle.best, kExampleOptimum, kEps);
  EXPECT_EQ(oracle.optimal_count, 1);

  const AssignmentProgram program = BuildDesignProgram(instance);
  const SolveResult result = Solve(program);
  ASSERT_EQ(result.status, SolveStatus::kOptimal);
  EXPECT_TRUE(result.proven_optimal);
  EXPECT_NEAR(result.objective, kExampleOptimum, kEps);
  EXPECT_GE(result.root_bound, result.objective - kEps);

  const AssignmentState state = StateFromSolution(program, result, instance);
  EXPECT_EQ(state.workers_of(0), (std::vector<WorkerId>{0, 1, 5}));
  EXPECT_EQ(state.workers_of(1), (std::vector<WorkerId>{0, 1, 3, 4}));
  EXPECT_EQ(state.workers_of(2), (std::vector<WorkerId>{2, 3, 4, 5}));
  EXPECT_NEAR(state.index(0).value, 0.6037962962962963, kEps);
  EXPECT_NEAR(state.index(0).expected_quality[0], 0.74, kEps);
  EXPECT_NEAR(state.index(0).expected_cost, 0.575, kEps);
  EXPECT_NEAR(GlobalValue(state, instance), kExampleOptimum, kEps);
  EXPECT_TRUE(CheckConstraints(state, instance).empty());
}

TEST(SolveTest, NodeBudgetExhaustionIsReported) {
  SolveOptions options;
  options.node_limit = 3;
  const SolveResult result = Solve(BuildDesignProgram(ExampleInstance()), options);
  EXPECT_EQ(result.status, SolveStatus::kBudgetExhausted);
  EXPECT_FALSE(result.proven_optimal);
}

TEST(SolveTest, InfeasibleColumnBoundsAreReported) {
  Instance instance = ExampleInstance();
  instance.constraints = {3, 3};
  instance.workload.tasks[0].max_cost = 0.0;  // nobody may join task 0
  const SolveResult result = Solve(BuildDesignProgram(instance));
  EXPECT_EQ(result.status, SolveStatus::kOptimal);
  EXPECT_EQ(result.task_satisfied[0], 0);

  AssignmentProgram program = BuildDesignProgram(ExampleInstance());
  program.Freeze(0, 0);
  program.Freeze(1, 0);
  program.Freeze(2, 0);  // worker 0 can no longer reach X_l = 1
  EXPECT_EQ(Solve(program).status, SolveStatus::kInfeasible);
}

TEST(SolveTest, FrozenVariablesAreRespected) {
  AssignmentProgram program = BuildDesignProgram(ExampleInstance());
  program.Freeze(program.FindVariable(3, 0), 1);
  const SolveResult result = Solve(program);
  ASSERT_TRUE(result.has_solution());
  EXPECT_EQ(result.assignment[program.FindVariable(3, 0)], 1);
  EXPECT_NEAR(result.objective, testing::BruteForceProgram(program).best, kEps);
}

class RandomDesignTest : public ::testing::TestWithParam<unsigned> {};

TEST_P(RandomDesignTest, MatchesMembershipEnumeration) {
  testing::RandomInstanceOptions o;
  o.workers = 5;
  o.tasks = 2 + GetParam() % 2;
  o.skills = 1 + GetParam() % 2;
  o.x_low = GetParam() % 3 == 0 ? 1 : 0;
  o.x_high = 2;
  o.threshold_scale = 1.2;
  const Instance instance = testing::RandomInstance(GetParam(), o);
  const testing::BruteForceResult oracle = testing::BruteForceDesign(instance);
  const SolveResult result = Solve(BuildDesignProgram(instance));
  ASSERT_EQ(result.status, SolveStatus::kOptimal);
  EXPECT_NEAR(result.objective, oracle.best, kEps);
  EXPECT_GE(result.root_bound, result.objective - kEps);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomDesignTest, ::testing::Range(0u, 40u));

// Integer (non-boolean) domains, as used by virtual-worker programs.
TEST(SolveTest, IntegerDomainsMatchVariableEnumeration) {
  for (unsigned seed = 0; seed < 25; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 3;
    o.tasks = 2;
    o.threshold_scale = 2.0;
    const Instance instance = testing::RandomInstance(seed, o);
    AssignmentProgram program = BuildDesignProgram(instance);
    for (ProgramVariable& var : program.variables) var.upper = 2;
    for (ProgramColumn& col : program.columns) {
      col.min_total = seed % 2;
      col.max_total = 3;
      col.is_virtual = true;
    }
    const testing::BruteForceResult oracle = testing::BruteForceProgram(program);
    const SolveResult result = Solve(program);
    ASSERT_EQ(result.has_solution(), oracle.feasible()) << "seed " << seed;
    if (oracle.feasible()) {
      EXPECT_NEAR(result.objective, oracle.best, kEps) << "seed " << seed;
    }
  }
}

TEST(EvaluateAssignmentTest, RejectsColumnBoundViolations) {
  const AssignmentProgram program = BuildDesignProgram(ExampleInstance());
  std::vector<int> x(18, 0);
  EXPECT_THROW(EvaluateAssignment(program, x), std::invalid_argument);
  x.assign(18, 1);
  EXPECT_THROW(EvaluateAssignment(program, x), std::invalid_argument);
  EXPECT_THROW(EvaluateAssignment(program, std::vector<int>(3, 0)),
               std::invalid_argument);
}

TEST(ReplacementTest, NoDeclinersMeansNoFreeVariables) {
  const Instance instance = ExampleInstance();
  AssignmentState state = SolveExample(instance);
  const std::vector<WorkerId> pool = {0, 1, 2, 3, 4, 5};
  const MaintenanceResult r = ReplaceWorkersExact(state, instance, 0, {}, pool);
  EXPECT_EQ(BuildReplacementProgram(state, instance, 0, {}, pool)
                .free_variable_count(),
            0);
  EXPECT_NEAR(r.value_after, r.value_before, kEps);
}

TEST(ReplacementTest, EmptyPoolLeavesTaskUnsatisfied) {
  const Instance instance = ExampleInstance();
  AssignmentState state = SolveExample(instance);
  const std::vector<WorkerId> decliners = {5};
  const MaintenanceResult r = ReplaceWorkersExact(state, instance, 0, decliners, {});
  EXPECT_EQ(r.solve.status, SolveStatus::kInfeasible);
  EXPECT_EQ(state.workers_of(0), (std::vector<WorkerId>{0, 1}));
  EXPECT_EQ(state.index(0).value, 0.0);
}

TEST(ReplacementTest, MatchesFrozenFullResolve) {
  const Instance instance = ExampleInstance();
  for (WorkerId decliner : {0, 1, 5}) {
    AssignmentState state = SolveExample(instance);
    const AssignmentState before = state;
    const std::vector<WorkerId> decliners = {decliner};
    const std::vector<WorkerId> pool = {0, 1, 2, 3, 4, 5};
    const AssignmentProgram marginal =
        BuildReplacementProgram(state, instance, 0, decliners, pool);
    const AssignmentState residual = WithoutRemovals(state, marginal);
    const MaintenanceResult r =
        ReplaceWorkersExact(state, instance, 0, decliners, pool);
    if (!r.solve.has_solution()) continue;

    AssignmentProgram full =
        FrozenFullProgram(instance, residual, FreePairs(marginal));
    const double oracle = testing::BruteForceProgram(full).best;
    EXPECT_NEAR(r.solve.objective + UntouchedValue(marginal, instance, residual),
                oracle, kEps);
    EXPECT_NEAR(r.value_after, oracle, kEps);
    EXPECT_TRUE(CheckNonPreemption(before, state, marginal.removals).empty());
    EXPECT_FALSE(state.contains(0, decliner));
    for (WorkerId u = 0; u < 6; ++u) EXPECT_LE(state.load(u), 2);
  }
}

TEST(AdditionTest, MatchesFrozenFullResolve) {
  Instance instance = ExampleInstance();
  AssignmentState state = SolveExample(instance);
  const AssignmentState before = state;
  instance.workers.push_back({6, {0.7}, 0.2, 0.9});
  instance.workers.push_back({7, {0.2}, 0.1, 0.5});
  const std::vector<WorkerId> added = {6, 7};
  state.EnsureWorkers(8);
  const AssignmentProgram marginal = BuildAdditionProgram(state, instance, added);
  EXPECT_EQ(marginal.variable_count(), 6);
  const MaintenanceResult r = AddWorkersExact(state, instance, added);
  ASSERT_EQ(r.solve.status, SolveStatus::kOptimal);
  const AssignmentProgram full =
      FrozenFullProgram(instance, before, FreePairs(marginal));
  EXPECT_NEAR(r.value_after, testing::BruteForceProgram(full).best, kEps);
  EXPECT_GE(r.value_after, r.value_before - kEps);
  EXPECT_TRUE(CheckNonPreemption(before, state).empty());
}

TEST(DeletionTest, MatchesFrozenFullResolve) {
  const Instance instance = ExampleInstance();
  AssignmentState state = SolveExample(instance);
  const AssignmentState before = state;
  const std::vector<WorkerId> deleted = {5};
  const AssignmentProgram marginal = BuildDeletionProgram(state, instance, deleted);
  ASSERT_EQ(marginal.tasks.size(), 2u);  // worker 5 held tasks 0 and 2
  AssignmentState residual = WithoutRemovals(state, marginal);
  residual.set_available(5, false);
  const MaintenanceResult r = DeleteWorkersExact(state, instance, deleted);
  ASSERT_TRUE(r.solve.has_solution());
  const AssignmentProgram full =
      FrozenFullProgram(instance, residual, FreePairs(marginal));
  EXPECT_NEAR(r.value_after, testing::BruteForceProgram(full).best, kEps);
  EXPECT_FALSE(state.available(5));
  EXPECT_EQ(state.load(5), 0);
  EXPECT_TRUE(CheckNonPreemption(before, state).empty());
  for (WorkerId u = 0; u < 5; ++u) EXPECT_LE(state.load(u), 2);
}

TEST(UpdateTest, MatchesFrozenFullResolve) {
  Instance instance = ExampleInstance();
  AssignmentState state = SolveExample(instance);
  const AssignmentState before = state;
  instance.workers[3].skills = {0.9};
  instance.workers[3].wage = 0.2;
  const std::vector<WorkerId> updated = {3};
  const AssignmentProgram marginal = BuildUpdateProgram(state, instance, updated);
  EXPECT_EQ(marginal.variable_count(), 3);
  const AssignmentState residual = WithoutRemovals(state, marginal);
  const MaintenanceResult r = UpdateWorkersExact(state, instance, updated);
  ASSERT_EQ(r.solve.status, SolveStatus::kOptimal);
  const AssignmentProgram full =
      FrozenFullProgram(instance, residual, FreePairs(marginal), {3});
  EXPECT_NEAR(r.value_after, testing::BruteForceProgram(full).best, kEps);
  EXPECT_TRUE(CheckNonPreemption(before, state, marginal.removals).empty());
  EXPECT_GE(state.load(3), 1);
  EXPECT_LE(state.load(3), 2);
  for (TaskId t = 0; t < 3; ++t) {
    EXPECT_NEAR(state.index(t).value,
                TaskValue(state.workers_of(t), instance.workload.tasks[t],
                          instance.workers, instance.weights)
                    .value,
                kEps);
  }
}

TEST(LinearRowsTest, ExampleRowCountsAndNames) {
  const AssignmentProgram program = BuildDesignProgram(ExampleInstance());
  int quality = 0, cost = 0, cardinality = 0;
  for (const LinearRow& row : LinearRows(program)) {
    quality += row.kind == LinearRow::Kind::kQuality;
    cost += row.kind == LinearRow::Kind::kCost;
    if (row.kind == LinearRow::Kind::kCardinality) {
      ++cardinality;
      EXPECT_EQ(row.lower, 1);
      EXPECT_EQ(row.upper, 2);
      EXPECT_EQ(row.terms.size(), 3u);
    }
  }
  EXPECT_EQ(quality, 3);
  EXPECT_EQ(cost, 3);
  EXPECT_EQ(cardinality, 6);
  EXPECT_EQ(VariableName(program, 0), "w0_t0");
  EXPECT_EQ(VariableName(program, 17), "w5_t2");

  std::ostringstream lp;
  WriteLpFile(program, lp);
  const std::string text = lp.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("Binaries"), std::string::npos);
  EXPECT_NE(text.find("w5_t2"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

// The linearization accepts exactly the assignments the piecewise objective
// scores positively: evaluate every row at each enumerated point with y set
// to the task's feasibility and z to its value.
TEST(LinearRowsTest, RowsHoldAtEveryFeasiblePoint) {
  const Instance instance = ExampleInstance();
  const AssignmentProgram program = BuildDesignProgram(instance);
  const std::vector<LinearRow> rows = LinearRows(program);
  for (unsigned mask = 0; mask < (1u << 18); mask += 97) {
    std::vector<int> x(18);
    for (int v = 0; v < 18; ++v) x[v] = mask >> v & 1u;
    std::vector<char> satisfied;
    double total;
    try {
      total = EvaluateAssignment(program, x, &satisfied);
    } catch (const std::invalid_argument&) {
      continue;
    }
    std::map<std::string, double> value;
    for (int v = 0; v < 18; ++v) value[VariableName(program, v)] = x[v];
    double z_sum = 0.0;
    for (int t = 0; t < 3; ++t) {
      std::vector<int> members;
      for (int v = 0; v < 18; ++v) {
        if (program.variables[v].task == t && x[v]) {
          members.push_back(program.columns[program.variables[v].column].id);
        }
      }
      const double z = TaskValue(members, instance.workload.tasks[t],
                                 instance.workers, instance.weights)
                           .value;
      value["y_t" + std::to_string(t)] = satisfied[t];
      value["z_t" + std::to_string(t)] = z;
      z_sum += z;
    }
    EXPECT_NEAR(z_sum, total, kEps);
    for (const LinearRow& row : rows) {
      double lhs = 0.0;
      for (const LinearTerm& term : row.terms) lhs += term.coefficient * value[term.variable];
      EXPECT_GE(lhs, row.lower - 1e-7) << row.name;
      EXPECT_LE(lhs, row.upper + 1e-7) << row.name;
    }
  }
}

}  // namespace
}  // namespace smartcrowd
