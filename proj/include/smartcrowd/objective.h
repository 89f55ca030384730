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

// Task values, the global objective and constraint checks.
//
// A task's value is W1 * (sum of expected quality) + W2 * (1 - w_t / W_t)
// when every skill threshold is met and the expected cost fits the budget,
// and exactly 0 otherwise. Expected aggregates weight every worker's skill
// and wage by its acceptance ratio.

#ifndef SMARTCROWD_OBJECTIVE_H_
#define SMARTCROWD_OBJECTIVE_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smartcrowd/model.h"

namespace smartcrowd {

struct Aggregates {
  std::vector<double> quality;
  double cost = 0.0;
  int count = 0;  // contributing workers (virtual multiplicities included)

  explicit Aggregates(int skill_count = 0) : quality(skill_count, 0.0) {}
  void Add(const WorkerProfile& worker, int multiplicity = 1);
};

struct TaskValueBreakdown {
  double value = 0.0;
  double quality_term = 0.0;  // sum over skills of expected quality
  double cost_term = 0.0;     // 1 - w_t / W_t
  bool feasible = false;
};

// Throws std::out_of_range for an id outside the worker list.
Aggregates ExpectedAggregates(std::span<const WorkerId> worker_ids,
                              std::span<const WorkerProfile> workers,
                              int skill_count);

// The piecewise value on precomputed aggregates. A task with W_t = 0 is only
// feasible while nobody is assigned to it.
TaskValueBreakdown EvaluateTask(const Aggregates& aggregates,
                                const TaskSpec& task,
                                const ObjectiveWeights& weights);

TaskValueBreakdown TaskValue(std::span<const WorkerId> worker_ids,
                             const TaskSpec& task,
                             std::span<const WorkerProfile> workers,
                             const ObjectiveWeights& weights);

// Sum of task values; recomputed from membership, never from stored P.
double GlobalValue(const AssignmentState& state, const Instance& instance);

// Recomputes value, expected quality and expected cost of every index.
void RefreshIndexes(AssignmentState& state, const Instance& instance);
void RefreshIndex(AssignmentState& state, const Instance& instance, TaskId task);

struct ConstraintViolation {
  enum class Kind {
    kQuality,
    kCost,
    kTooManyTasks,
    kTooFewTasks,
    kUnavailableWorker,
    kPreemption,
  };
  Kind kind;
  TaskId task = -1;
  WorkerId worker = -1;
  std::string message;
};

std::vector<ConstraintViolation> CheckConstraints(const AssignmentState& state,
                                                  const Instance& instance);

// Pairs held in `before` by a still-available worker but missing in `after`.
// `released` lists pairs a maintenance event legitimately dropped (decliners).
std::vector<ConstraintViolation> CheckNonPreemption(
    const AssignmentState& before, const AssignmentState& after,
    std::span<const std::pair<WorkerId, TaskId>> released = {});

}  // namespace smartcrowd

#endif  // SMARTCROWD_OBJECTIVE_H_
