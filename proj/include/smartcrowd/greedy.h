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

// Greedy index design and maintenance.
//
// Each step adds the (worker, task) pair with the largest marginal gain in
// global value. A pair is a candidate when the worker is available, holds
// fewer than X_h tasks, is not already on the task, and the task's expected
// cost stays within budget after the addition.
//
// While a task is below a quality threshold its value is 0, so every single
// addition can have zero gain. When no pair has positive gain, a pair that
// shrinks a quality deficit of a still-reachable task is taken instead,
// ordered by its relaxed gain W1 * sum_j(p * s_j) - W2 * p * w / W_t.
// Ties go to the lowest worker id, then the lowest task id.

#ifndef SMARTCROWD_GREEDY_H_
#define SMARTCROWD_GREEDY_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "smartcrowd/model.h"
#include "smartcrowd/objective.h"

namespace smartcrowd {

struct GreedyStep {
  WorkerId worker = 0;
  TaskId task = 0;
  double gain = 0.0;           // change in global value caused by this step
  double running_value = 0.0;  // global value after the step
  bool toward_threshold = false;  // taken by the deficit rule

  bool operator==(const GreedyStep&) const = default;
};

enum class StopReason {
  kNotConsidered,   // task outside the run's scope
  kNoPositiveGain,  // candidates remain but none improves the task
  kBudget,          // every eligible worker would overrun the budget
  kNoCandidates,    // no eligible worker left (all maxed out or on the task)
  kUnreachable,     // below threshold and remaining workers cannot close it
};
const char* ToString(StopReason reason);

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  std::vector<StopReason> stop_reasons;  // indexed by task id
  std::int64_t pair_evaluations = 0;     // marginal-gain computations
  std::vector<WorkerId> below_minimum;   // workers left under X_l

  bool operator==(const GreedyTrace&) const = default;
};

struct GreedyResult {
  AssignmentState state;
  GreedyTrace trace;
};

// Change in the value of `task` if `worker` joins it.
double MarginalGain(const AssignmentState& state, const Instance& instance,
                    WorkerId worker, TaskId task);

GreedyResult OfflineGreedyDesign(const Instance& instance);

// Decliners leave `task`, then pool workers join one at a time.
GreedyTrace OnlineGreedyReplace(AssignmentState& state, const Instance& instance,
                                TaskId task,
                                std::span<const WorkerId> unavailable,
                                std::span<const WorkerId> pool);

// New workers (already in instance.workers) join tasks; nobody else moves.
GreedyTrace GreedyAddWorkers(AssignmentState& state, const Instance& instance,
                             std::span<const WorkerId> new_workers);

// Deleted workers become unavailable and leave their tasks; each affected
// task is then refilled in id order from the remaining available workers.
GreedyTrace GreedyDeleteWorkers(AssignmentState& state, const Instance& instance,
                                std::span<const WorkerId> deleted);

// `instance` holds the new profiles. Updated workers leave every task and are
// greedily reassigned across all tasks.
GreedyTrace GreedyUpdateWorkers(AssignmentState& state, const Instance& instance,
                                std::span<const WorkerId> updated);

// Columns: step,worker,task,gain,running_value.
void WriteTraceCsv(const GreedyTrace& trace, std::ostream& out);

}  // namespace smartcrowd

#endif  // SMARTCROWD_GREEDY_H_
