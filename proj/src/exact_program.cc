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

#include <algorithm>
#include <set>
#include <stdexcept>

#include "smartcrowd/exact.h"

namespace smartcrowd {

int AssignmentProgram::FindVariable(int column_id, TaskId task) const {
  for (int v = 0; v < variable_count(); ++v) {
    const ProgramVariable& var = variables[v];
    if (columns[var.column].id == column_id && tasks[var.task].spec.id == task) {
      return v;
    }
  }
  return -1;
}

void AssignmentProgram::Freeze(int variable, int value) {
  const ProgramVariable& var = variables.at(variable);
  if (value < 0 || value > var.upper) {
    throw std::invalid_argument("frozen value out of the variable's domain");
  }
  frozen[variable] = value;
}

double EvaluateAssignment(const AssignmentProgram& program,
                          std::span<const int> assignment,
                          std::vector<char>* task_satisfied) {
  if (static_cast<int>(assignment.size()) != program.variable_count()) {
    throw std::invalid_argument("assignment size does not match the program");
  }
  std::vector<Aggregates> agg;
  for (const ProgramTask& t : program.tasks) agg.push_back(t.base);
  std::vector<int> column_total(program.columns.size(), 0);
  for (int v = 0; v < program.variable_count(); ++v) {
    const ProgramVariable& var = program.variables[v];
    const int x = assignment[v];
    if (x < 0 || x > var.upper) {
      throw std::invalid_argument("variable " + std::to_string(v) +
                                  " outside its domain");
    }
    if (auto it = program.frozen.find(v); it != program.frozen.end() &&
                                          it->second != x) {
      throw std::invalid_argument("variable " + std::to_string(v) +
                                  " differs from its frozen value");
    }
    if (x == 0) continue;
    const ProgramColumn& col = program.columns[var.column];
    Aggregates& a = agg[var.task];
    for (int j = 0; j < program.skill_count; ++j) a.quality[j] += x * col.quality[j];
    a.cost += x * col.cost;
    a.count += x;
    column_total[var.column] += x;
  }
  for (size_t c = 0; c < program.columns.size(); ++c) {
    const ProgramColumn& col = program.columns[c];
    if (column_total[c] < col.min_total || column_total[c] > col.max_total) {
      throw std::invalid_argument("column " + std::to_string(col.id) +
                                  " total outside [" +
                                  std::to_string(col.min_total) + ", " +
                                  std::to_string(col.max_total) + "]");
    }
  }
  double total = 0.0;
  if (task_satisfied) task_satisfied->assign(program.tasks.size(), 0);
  for (size_t t = 0; t < program.tasks.size(); ++t) {
    const TaskValueBreakdown b =
        EvaluateTask(agg[t], program.tasks[t].spec, program.weights);
    if (task_satisfied) (*task_satisfied)[t] = b.feasible;
    total += b.value;
  }
  return total;
}

namespace {

ProgramColumn WorkerColumn(const WorkerProfile& worker, int min_total,
                           int max_total) {
  ProgramColumn col;
  col.id = worker.id;
  for (double s : worker.skills) col.quality.push_back(worker.acceptance_ratio * s);
  col.cost = worker.acceptance_ratio * worker.wage;
  col.min_total = min_total;
  col.max_total = max_total;
  return col;
}

AssignmentProgram EmptyProgram(const Instance& instance) {
  AssignmentProgram program;
  program.skill_count = instance.skill_count();
  program.weights = instance.weights;
  return program;
}

// Residual aggregates of a task's members minus `excluded`.
Aggregates Residual(const AssignmentState& state, const Instance& instance,
                    TaskId task, const std::set<WorkerId>& excluded) {
  Aggregates a(instance.skill_count());
  for (WorkerId u : state.workers_of(task)) {
    if (!excluded.contains(u)) a.Add(instance.workers.at(u));
  }
  return a;
}

void CheckWorkerIds(const Instance& instance, std::span<const WorkerId> ids) {
  for (WorkerId u : ids) {
    if (u < 0 || u >= instance.worker_count()) {
      throw std::out_of_range("unknown worker id " + std::to_string(u));
    }
  }
}

}  // namespace

AssignmentProgram BuildDesignProgram(const Instance& instance) {
  const ConstraintConfig& c = instance.constraints;
  if (c.tasks_per_worker_min > instance.task_count()) {
    throw InfeasibleProgram("X_l exceeds the number of tasks");
  }
  AssignmentProgram program = EmptyProgram(instance);
  for (const TaskSpec& t : instance.workload.tasks) {
    program.tasks.push_back({t, Aggregates(instance.skill_count()), false});
  }
  for (const WorkerProfile& u : instance.workers) {
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(
        WorkerColumn(u, c.tasks_per_worker_min, c.tasks_per_worker_max));
    for (int t = 0; t < instance.task_count(); ++t) {
      program.variables.push_back({col, t, 1});
    }
  }
  return program;
}

namespace {

AssignmentProgram ReplacementProgram(const AssignmentState& state,
                                     const Instance& instance, TaskId task,
                                     std::span<const WorkerId> unavailable,
                                     std::span<const WorkerId> pool, bool fill) {
  CheckWorkerIds(instance, unavailable);
  CheckWorkerIds(instance, pool);
  const std::set<WorkerId> leaving(unavailable.begin(), unavailable.end());
  AssignmentProgram program = EmptyProgram(instance);
  program.tasks.push_back({instance.workload.tasks.at(task),
                           Residual(state, instance, task, leaving),
                           fill || !leaving.empty()});
  for (WorkerId u : leaving) {
    if (state.contains(task, u)) program.removals.emplace_back(u, task);
  }
  if (leaving.empty() && !fill) return program;

  const std::set<WorkerId> candidates(pool.begin(), pool.end());
  for (WorkerId u : candidates) {
    if (leaving.contains(u) || state.contains(task, u)) continue;
    if (u >= state.worker_count() || !state.available(u)) continue;
    if (state.load(u) >= instance.constraints.tasks_per_worker_max) continue;
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(WorkerColumn(instance.workers[u], 0, 1));
    program.variables.push_back({col, 0, 1});
  }
  return program;
}

}  // namespace

AssignmentProgram BuildReplacementProgram(const AssignmentState& state,
                                          const Instance& instance, TaskId task,
                                          std::span<const WorkerId> unavailable,
                                          std::span<const WorkerId> pool) {
  return ReplacementProgram(state, instance, task, unavailable, pool, false);
}

AssignmentProgram BuildFillProgram(const AssignmentState& state,
                                   const Instance& instance, TaskId task,
                                   std::span<const WorkerId> pool) {
  return ReplacementProgram(state, instance, task, {}, pool, true);
}

AssignmentProgram BuildAdditionProgram(const AssignmentState& state,
                                       const Instance& instance,
                                       std::span<const WorkerId> new_workers) {
  CheckWorkerIds(instance, new_workers);
  AssignmentProgram program = EmptyProgram(instance);
  for (const TaskSpec& t : instance.workload.tasks) {
    program.tasks.push_back({t, Residual(state, instance, t.id, {}), false});
  }
  const std::set<WorkerId> added(new_workers.begin(), new_workers.end());
  for (WorkerId u : added) {
    if (u < state.worker_count() && state.load(u) > 0) {
      throw std::invalid_argument("worker " + std::to_string(u) +
                                  " already holds tasks");
    }
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(WorkerColumn(
        instance.workers[u], 0, instance.constraints.tasks_per_worker_max));
    for (int t = 0; t < instance.task_count(); ++t) {
      program.variables.push_back({col, t, 1});
    }
  }
  return program;
}

AssignmentProgram BuildDeletionProgram(const AssignmentState& state,
                                       const Instance& instance,
                                       std::span<const WorkerId> deleted) {
  CheckWorkerIds(instance, deleted);
  const std::set<WorkerId> gone(deleted.begin(), deleted.end());
  AssignmentProgram program = EmptyProgram(instance);
  std::vector<TaskId> affected;
  for (TaskId t = 0; t < instance.task_count(); ++t) {
    bool hit = false;
    for (WorkerId u : gone) {
      if (u < state.worker_count() && state.contains(t, u)) {
        program.removals.emplace_back(u, t);
        hit = true;
      }
    }
    if (!hit) continue;
    affected.push_back(t);
    program.tasks.push_back({instance.workload.tasks[t],
                             Residual(state, instance, t, gone), false});
  }
  const int x_h = instance.constraints.tasks_per_worker_max;
  for (WorkerId u = 0; u < std::min(state.worker_count(), instance.worker_count());
       ++u) {
    if (gone.contains(u) || !state.available(u) || state.load(u) >= x_h) continue;
    std::vector<int> open;
    for (size_t k = 0; k < affected.size(); ++k) {
      if (!state.contains(affected[k], u)) open.push_back(static_cast<int>(k));
    }
    if (open.empty()) continue;
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(
        WorkerColumn(instance.workers[u], 0, x_h - state.load(u)));
    for (int k : open) program.variables.push_back({col, k, 1});
  }
  return program;
}

AssignmentProgram BuildUpdateProgram(const AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> updated) {
  CheckWorkerIds(instance, updated);
  const ConstraintConfig& c = instance.constraints;
  if (c.tasks_per_worker_min > instance.task_count()) {
    throw InfeasibleProgram("X_l exceeds the number of tasks");
  }
  const std::set<WorkerId> changed(updated.begin(), updated.end());
  AssignmentProgram program = EmptyProgram(instance);
  for (const TaskSpec& t : instance.workload.tasks) {
    for (WorkerId u : changed) {
      if (u < state.worker_count() && state.contains(t.id, u)) {
        program.removals.emplace_back(u, t.id);
      }
    }
    program.tasks.push_back({t, Residual(state, instance, t.id, changed), false});
  }
  for (WorkerId u : changed) {
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(WorkerColumn(
        instance.workers[u], c.tasks_per_worker_min, c.tasks_per_worker_max));
    for (int t = 0; t < instance.task_count(); ++t) {
      program.variables.push_back({col, t, 1});
    }
  }
  return program;
}

void ApplySolution(const AssignmentProgram& program, const SolveResult& result,
                   const Instance& instance, AssignmentState& state) {
  state.EnsureWorkers(instance.worker_count());
  std::set<TaskId> touched;
  for (const auto& [u, t] : program.removals) {
    if (state.contains(t, u)) {
      state.Unassign(u, t);
      touched.insert(t);
    }
  }
  if (result.has_solution()) {
    for (int v = 0; v < program.variable_count(); ++v) {
      if (result.assignment[v] == 0) continue;
      const ProgramVariable& var = program.variables[v];
      const ProgramColumn& col = program.columns[var.column];
      if (col.is_virtual) {
        throw std::logic_error("virtual columns need disintegration first");
      }
      const TaskId t = program.tasks[var.task].spec.id;
      if (state.contains(t, col.id)) continue;  // frozen existing pair
      state.Assign(col.id, t);
      touched.insert(t);
    }
  }
  for (TaskId t : touched) RefreshIndex(state, instance, t);
}

AssignmentState StateFromSolution(const AssignmentProgram& program,
                                  const SolveResult& result,
                                  const Instance& instance) {
  AssignmentState state(instance.worker_count(), instance.task_count());
  ApplySolution(program, result, instance, state);
  RefreshIndexes(state, instance);
  return state;
}

namespace {

MaintenanceResult SolveAndApply(const AssignmentProgram& program,
                                AssignmentState& state, const Instance& instance,
                                const SolveOptions& options) {
  MaintenanceResult out;
  out.value_before = GlobalValue(state, instance);
  out.solve = Solve(program, options);
  ApplySolution(program, out.solve, instance, state);
  out.value_after = GlobalValue(state, instance);
  return out;
}

}  // namespace

MaintenanceResult ReplaceWorkersExact(AssignmentState& state,
                                      const Instance& instance, TaskId task,
                                      std::span<const WorkerId> unavailable,
                                      std::span<const WorkerId> pool,
                                      const SolveOptions& options) {
  return SolveAndApply(
      BuildReplacementProgram(state, instance, task, unavailable, pool), state,
      instance, options);
}

MaintenanceResult FillTaskExact(AssignmentState& state, const Instance& instance,
                                TaskId task, std::span<const WorkerId> pool,
                                const SolveOptions& options) {
  return SolveAndApply(BuildFillProgram(state, instance, task, pool), state,
                       instance, options);
}

MaintenanceResult AddWorkersExact(AssignmentState& state,
                                  const Instance& instance,
                                  std::span<const WorkerId> new_workers,
                                  const SolveOptions& options) {
  state.EnsureWorkers(instance.worker_count());
  return SolveAndApply(BuildAdditionProgram(state, instance, new_workers), state,
                       instance, options);
}

MaintenanceResult DeleteWorkersExact(AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> deleted,
                                     const SolveOptions& options) {
  const AssignmentProgram program =
      BuildDeletionProgram(state, instance, deleted);
  for (WorkerId u : deleted) {
    if (u < state.worker_count()) state.set_available(u, false);
  }
  return SolveAndApply(program, state, instance, options);
}

MaintenanceResult UpdateWorkersExact(AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> updated,
                                     const SolveOptions& options) {
  return SolveAndApply(BuildUpdateProgram(state, instance, updated), state,
                       instance, options);
}

}  // namespace smartcrowd
