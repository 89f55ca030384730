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

#include "smartcrowd/model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace smartcrowd {

AssignmentState::AssignmentState(int worker_count, int task_count)
    : indexes_(task_count), load_(worker_count, 0),
      available_(worker_count, 1) {
  for (int t = 0; t < task_count; ++t) indexes_[t].task_id = t;
}

void AssignmentState::set_available(WorkerId worker, bool available) {
  available_.at(worker) = available ? 1 : 0;
}

bool AssignmentState::contains(TaskId task, WorkerId worker) const {
  const auto& members = indexes_.at(task).assigned_workers;
  return std::binary_search(members.begin(), members.end(), worker);
}

void AssignmentState::Assign(WorkerId worker, TaskId task) {
  auto& members = indexes_.at(task).assigned_workers;
  auto it = std::lower_bound(members.begin(), members.end(), worker);
  if (it != members.end() && *it == worker) {
    throw std::logic_error("worker " + std::to_string(worker) +
                           " already assigned to task " +
                           std::to_string(task));
  }
  members.insert(it, worker);
  ++load_.at(worker);
}

void AssignmentState::Unassign(WorkerId worker, TaskId task) {
  auto& members = indexes_.at(task).assigned_workers;
  auto it = std::lower_bound(members.begin(), members.end(), worker);
  if (it == members.end() || *it != worker) {
    throw std::logic_error("worker " + std::to_string(worker) +
                           " not assigned to task " + std::to_string(task));
  }
  members.erase(it);
  --load_.at(worker);
}

std::vector<TaskId> AssignmentState::UnassignEverywhere(WorkerId worker) {
  std::vector<TaskId> affected;
  for (TaskId t = 0; t < task_count(); ++t) {
    if (contains(t, worker)) {
      Unassign(worker, t);
      affected.push_back(t);
    }
  }
  return affected;
}

void AssignmentState::EnsureWorkers(int worker_count) {
  if (worker_count > this->worker_count()) {
    load_.resize(worker_count, 0);
    available_.resize(worker_count, 1);
  }
}

std::vector<std::pair<WorkerId, TaskId>> AssignmentState::Pairs() const {
  std::vector<std::pair<WorkerId, TaskId>> pairs;
  for (const CDexIndex& index : indexes_) {
    for (WorkerId u : index.assigned_workers) pairs.emplace_back(u, index.task_id);
  }
  return pairs;
}

namespace {

bool InUnitRange(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

ValidationReport ValidateInstance(const Instance& instance) {
  ValidationReport report;
  auto violation = [&report](const std::string& text) {
    report.violations.push_back(text);
  };
  const int m = instance.skill_count();
  if (m <= 0) violation("skill count must be positive");

  for (int i = 0; i < instance.worker_count(); ++i) {
    const WorkerProfile& u = instance.workers[i];
    const std::string who = "worker " + std::to_string(u.id);
    if (u.id != i) violation(who + ": id must equal its position " + std::to_string(i));
    if (static_cast<int>(u.skills.size()) != m) {
      violation(who + ": skills length " + std::to_string(u.skills.size()) +
                " != skill count " + std::to_string(m));
    }
    for (double s : u.skills) {
      if (!InUnitRange(s)) {
        violation(who + ": skill out of [0,1]");
        break;
      }
    }
    if (!InUnitRange(u.wage)) violation(who + ": wage out of [0,1]");
    if (!InUnitRange(u.acceptance_ratio)) {
      violation(who + ": acceptance ratio out of [0,1]");
    }
  }

  std::set<TaskId> seen;
  for (int i = 0; i < instance.task_count(); ++i) {
    const TaskSpec& t = instance.workload.tasks[i];
    const std::string what = "task " + std::to_string(t.id);
    if (!seen.insert(t.id).second) violation(what + ": duplicate id");
    if (t.id != i) violation(what + ": id must equal its position " + std::to_string(i));
    if (static_cast<int>(t.quality_thresholds.size()) != m) {
      violation(what + ": thresholds length " +
                std::to_string(t.quality_thresholds.size()) +
                " != skill count " + std::to_string(m));
    }
    for (double q : t.quality_thresholds) {
      if (!std::isfinite(q) || q < 0.0) {
        violation(what + ": negative quality threshold");
        break;
      }
    }
    if (!std::isfinite(t.max_cost) || t.max_cost < 0.0) {
      violation(what + ": negative max cost");
    }
  }

  const ConstraintConfig& c = instance.constraints;
  if (c.tasks_per_worker_min < 0) violation("X_l must be non-negative");
  if (c.tasks_per_worker_max < 1) violation("X_h must be positive");
  if (c.tasks_per_worker_min > c.tasks_per_worker_max) violation("X_l > X_h");
  if (c.tasks_per_worker_min > instance.task_count()) {
    violation("X_l exceeds the number of tasks; no worker can reach it");
  }

  const ObjectiveWeights& w = instance.weights;
  if (!(w.w1 >= 0.0 && w.w1 <= 1.0) || !(w.w2 >= 0.0 && w.w2 <= 1.0)) {
    violation("weights must lie in [0,1]");
  }
  if (std::abs(w.w1 + w.w2 - 1.0) > kTolerance) violation("W1+W2 != 1");

  const long long slots =
      static_cast<long long>(instance.worker_count()) * c.tasks_per_worker_max;
  if (slots < instance.task_count()) {
    std::ostringstream os;
    os << "n*X_h = " << slots << " < |T| = " << instance.task_count()
       << ": some task must stay empty";
    report.warnings.push_back(os.str());
  }
  return report;
}

Instance ExampleInstance() {
  Instance instance;
  const double skill[] = {0.1, 0.3, 0.2, 0.6, 0.4, 0.5};
  const double wage[] = {0.05, 0.25, 0.3, 0.7, 0.3, 0.4};
  const double ratio[] = {0.8, 0.7, 0.8, 0.5, 0.6, 0.9};
  for (int i = 0; i < 6; ++i) {
    instance.workers.push_back({i, {skill[i]}, wage[i], ratio[i]});
  }
  instance.workload.skill_count = 1;
  const double threshold[] = {0.7, 0.8, 0.9};
  const double cost[] = {1.08, 1.1, 2.0};
  for (int j = 0; j < 3; ++j) {
    instance.workload.tasks.push_back({j, {threshold[j]}, cost[j]});
  }
  instance.constraints = {1, 2};
  instance.weights = {0.5, 0.5};
  return instance;
}

}  // namespace smartcrowd
