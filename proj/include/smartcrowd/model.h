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

// Domain types shared by every module: worker profiles, tasks, workloads,
// constraint and weight configuration, per-task indexes and the mutable
// assignment state.
//
// Worker and task ids are dense non-negative integers equal to their position
// in the owning vector. Every tie-break in the library is "lowest id first".

#ifndef SMARTCROWD_MODEL_H_
#define SMARTCROWD_MODEL_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smartcrowd {

using WorkerId = int;
using TaskId = int;

// Absolute tolerance for every real-valued comparison.
inline constexpr double kTolerance = 1e-9;

struct WorkerProfile {
  WorkerId id = 0;
  std::vector<double> skills;  // expertise per skill, each in [0,1]
  double wage = 0.0;           // minimum acceptable pay per task
  double acceptance_ratio = 0.0;

  bool operator==(const WorkerProfile&) const = default;
};

struct TaskSpec {
  TaskId id = 0;
  std::vector<double> quality_thresholds;  // minimum aggregate per skill
  double max_cost = 0.0;

  bool operator==(const TaskSpec&) const = default;
};

struct Workload {
  int skill_count = 0;
  std::vector<TaskSpec> tasks;

  int size() const { return static_cast<int>(tasks.size()); }
  bool operator==(const Workload&) const = default;
};

struct ConstraintConfig {
  int tasks_per_worker_min = 0;  // X_l
  int tasks_per_worker_max = 1;  // X_h

  bool operator==(const ConstraintConfig&) const = default;
};

struct ObjectiveWeights {
  double w1 = 0.5;  // weight of summed expected quality
  double w2 = 0.5;  // weight of the cost-savings ratio

  static ObjectiveWeights FromSkillWeight(double w1) { return {w1, 1.0 - w1}; }
  bool operator==(const ObjectiveWeights&) const = default;
};

// Everything a solver needs: the worker pool, the workload and the knobs.
struct Instance {
  std::vector<WorkerProfile> workers;
  Workload workload;
  ConstraintConfig constraints;
  ObjectiveWeights weights;

  int worker_count() const { return static_cast<int>(workers.size()); }
  int task_count() const { return workload.size(); }
  int skill_count() const { return workload.skill_count; }
  bool operator==(const Instance&) const = default;
};

// The pair (P, L) for one task: value, expected quality per skill, expected
// cost, and the assigned workers (kept sorted by id).
struct CDexIndex {
  TaskId task_id = 0;
  double value = 0.0;
  std::vector<double> expected_quality;
  double expected_cost = 0.0;
  std::vector<WorkerId> assigned_workers;

  bool operator==(const CDexIndex&) const = default;
};

// A cluster of profile-similar workers summarized conservatively: minimum
// p-scaled skill per dimension and maximum p-scaled wage over its members.
struct VirtualWorker {
  int id = 0;
  std::vector<double> skills;
  double wage = 0.0;
  std::vector<WorkerId> members;
  int capacity_max = 0;  // |members| * X_h
  int capacity_min = 0;  // |members| * X_l

  int size() const { return static_cast<int>(members.size()); }
  bool operator==(const VirtualWorker&) const = default;
};

// Worker-to-task assignment with one index per task and a load counter per
// worker. Index P vectors are refreshed by RefreshIndexes (objective.h) after
// membership changes; membership and loads are always kept consistent here.
class AssignmentState {
 public:
  AssignmentState() = default;
  AssignmentState(int worker_count, int task_count);

  int worker_count() const { return static_cast<int>(load_.size()); }
  int task_count() const { return static_cast<int>(indexes_.size()); }

  const CDexIndex& index(TaskId task) const { return indexes_.at(task); }
  CDexIndex& mutable_index(TaskId task) { return indexes_.at(task); }
  const std::vector<CDexIndex>& indexes() const { return indexes_; }
  const std::vector<WorkerId>& workers_of(TaskId task) const {
    return indexes_.at(task).assigned_workers;
  }

  int load(WorkerId worker) const { return load_.at(worker); }
  bool available(WorkerId worker) const { return available_.at(worker); }
  void set_available(WorkerId worker, bool available);
  bool contains(TaskId task, WorkerId worker) const;

  // Both throw std::logic_error when the pair is already present / absent.
  void Assign(WorkerId worker, TaskId task);
  void Unassign(WorkerId worker, TaskId task);
  // Removes the worker from every task it holds; returns the affected tasks.
  std::vector<TaskId> UnassignEverywhere(WorkerId worker);

  // Grows the per-worker arrays so ids < worker_count are addressable.
  void EnsureWorkers(int worker_count);

  // Every (worker, task) pair currently assigned, task-major.
  std::vector<std::pair<WorkerId, TaskId>> Pairs() const;

  bool operator==(const AssignmentState&) const = default;

 private:
  std::vector<CDexIndex> indexes_;
  std::vector<int> load_;
  std::vector<char> available_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

// Checks every model invariant; never throws.
ValidationReport ValidateInstance(const Instance& instance);

// The six-worker, three-task running example (one skill, X_l=1, X_h=2,
// W1=W2=0.5).
Instance ExampleInstance();

}  // namespace smartcrowd

#endif  // SMARTCROWD_MODEL_H_
