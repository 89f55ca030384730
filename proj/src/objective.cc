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

#include "smartcrowd/objective.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace smartcrowd {

void Aggregates::Add(const WorkerProfile& worker, int multiplicity) {
  const double p = worker.acceptance_ratio * multiplicity;
  for (size_t j = 0; j < quality.size(); ++j) quality[j] += p * worker.skills[j];
  cost += p * worker.wage;
  count += multiplicity;
}

Aggregates ExpectedAggregates(std::span<const WorkerId> worker_ids,
                              std::span<const WorkerProfile> workers,
                              int skill_count) {
  Aggregates aggregates(skill_count);
  for (WorkerId id : worker_ids) {
    if (id < 0 || id >= static_cast<int>(workers.size())) {
      throw std::out_of_range("unknown worker id " + std::to_string(id));
    }
    aggregates.Add(workers[id]);
  }
  return aggregates;
}

TaskValueBreakdown EvaluateTask(const Aggregates& aggregates,
                                const TaskSpec& task,
                                const ObjectiveWeights& weights) {
  TaskValueBreakdown out;
  bool quality_ok = true;
  for (size_t j = 0; j < aggregates.quality.size(); ++j) {
    out.quality_term += aggregates.quality[j];
    if (aggregates.quality[j] < task.quality_thresholds[j] - kTolerance) {
      quality_ok = false;
    }
  }
  bool cost_ok;
  if (task.max_cost > 0.0) {
    out.cost_term = 1.0 - aggregates.cost / task.max_cost;
    cost_ok = aggregates.cost <= task.max_cost + kTolerance;
  } else {
    // w_t / W_t is undefined once anyone is assigned.
    cost_ok = aggregates.count == 0;
    out.cost_term = cost_ok ? 1.0 : 0.0;
  }
  out.feasible = quality_ok && cost_ok;
  out.value = out.feasible
                  ? weights.w1 * out.quality_term + weights.w2 * out.cost_term
                  : 0.0;
  return out;
}

TaskValueBreakdown TaskValue(std::span<const WorkerId> worker_ids,
                             const TaskSpec& task,
                             std::span<const WorkerProfile> workers,
                             const ObjectiveWeights& weights) {
  const int m = static_cast<int>(task.quality_thresholds.size());
  return EvaluateTask(ExpectedAggregates(worker_ids, workers, m), task, weights);
}

double GlobalValue(const AssignmentState& state, const Instance& instance) {
  double total = 0.0;
  for (const TaskSpec& task : instance.workload.tasks) {
    total += TaskValue(state.workers_of(task.id), task, instance.workers,
                       instance.weights)
                 .value;
  }
  return total;
}

void RefreshIndex(AssignmentState& state, const Instance& instance,
                  TaskId task) {
  CDexIndex& index = state.mutable_index(task);
  const Aggregates agg = ExpectedAggregates(
      index.assigned_workers, instance.workers, instance.skill_count());
  index.expected_quality = agg.quality;
  index.expected_cost = agg.cost;
  index.value =
      EvaluateTask(agg, instance.workload.tasks.at(task), instance.weights).value;
}

void RefreshIndexes(AssignmentState& state, const Instance& instance) {
  for (TaskId t = 0; t < state.task_count(); ++t) RefreshIndex(state, instance, t);
}

std::vector<ConstraintViolation> CheckConstraints(const AssignmentState& state,
                                                  const Instance& instance) {
  using Kind = ConstraintViolation::Kind;
  std::vector<ConstraintViolation> out;
  const int m = instance.skill_count();
  for (const TaskSpec& task : instance.workload.tasks) {
    const auto& members = state.workers_of(task.id);
    const Aggregates agg = ExpectedAggregates(members, instance.workers, m);
    for (int j = 0; j < m; ++j) {
      if (agg.quality[j] < task.quality_thresholds[j] - kTolerance) {
        std::ostringstream os;
        os << "task " << task.id << " skill " << j << ": expected quality "
           << agg.quality[j] << " < threshold " << task.quality_thresholds[j];
        out.push_back({Kind::kQuality, task.id, -1, os.str()});
      }
    }
    const bool cost_ok = task.max_cost > 0.0
                             ? agg.cost <= task.max_cost + kTolerance
                             : agg.count == 0;
    if (!cost_ok) {
      std::ostringstream os;
      os << "task " << task.id << ": expected cost " << agg.cost
         << " exceeds budget " << task.max_cost;
      out.push_back({Kind::kCost, task.id, -1, os.str()});
    }
    for (WorkerId u : members) {
      if (!state.available(u)) {
        out.push_back({Kind::kUnavailableWorker, task.id, u,
                       "worker " + std::to_string(u) +
                           " is unavailable but assigned to task " +
                           std::to_string(task.id)});
      }
    }
  }
  const ConstraintConfig& c = instance.constraints;
  for (WorkerId u = 0; u < instance.worker_count(); ++u) {
    const int load = u < state.worker_count() ? state.load(u) : 0;
    if (load > c.tasks_per_worker_max) {
      out.push_back({Kind::kTooManyTasks, -1, u,
                     "worker " + std::to_string(u) + " holds " +
                         std::to_string(load) + " tasks > X_h"});
    }
    const bool active = u >= state.worker_count() || state.available(u);
    if (active && load < c.tasks_per_worker_min) {
      out.push_back({Kind::kTooFewTasks, -1, u,
                     "worker " + std::to_string(u) + " holds " +
                         std::to_string(load) + " tasks < X_l"});
    }
  }
  return out;
}

std::vector<ConstraintViolation> CheckNonPreemption(
    const AssignmentState& before, const AssignmentState& after,
    std::span<const std::pair<WorkerId, TaskId>> released) {
  std::vector<ConstraintViolation> out;
  for (const auto& [u, t] : before.Pairs()) {
    if (std::find(released.begin(), released.end(), std::pair{u, t}) !=
        released.end()) {
      continue;
    }
    const bool still_available =
        u < after.worker_count() && after.available(u);
    if (still_available && !after.contains(t, u)) {
      out.push_back({ConstraintViolation::Kind::kPreemption, t, u,
                     "worker " + std::to_string(u) + " was pulled out of task " +
                         std::to_string(t)});
    }
  }
  return out;
}

}  // namespace smartcrowd
