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

#include "smartcrowd/virtual_workers.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "smartcrowd/objective.h"

namespace smartcrowd {

double ProfileDistance(const WorkerProfile& a, const WorkerProfile& b) {
  double sum = 0.0;
  for (size_t j = 0; j < a.skills.size(); ++j) {
    const double d = a.acceptance_ratio * a.skills[j] - b.acceptance_ratio * b.skills[j];
    sum += d * d;
  }
  const double d = a.acceptance_ratio * a.wage - b.acceptance_ratio * b.wage;
  return std::sqrt(sum + d * d);
}

double DistancePercentile(std::span<const WorkerProfile> workers,
                          double percentile) {
  if (percentile < 0.0 || percentile > 100.0) {
    throw std::invalid_argument("percentile outside [0, 100]");
  }
  const long long n = static_cast<long long>(workers.size());
  const long long pairs = n * (n - 1) / 2;
  if (pairs == 0) return 0.0;
  const long long stride = (pairs + kMaxPercentilePairs - 1) / kMaxPercentilePairs;
  std::vector<double> d;
  d.reserve(pairs / stride + 1);
  long long k = 0;
  for (long long i = 0; i < n; ++i) {
    for (long long j = i + 1; j < n; ++j, ++k) {
      if (k % stride == 0) d.push_back(ProfileDistance(workers[i], workers[j]));
    }
  }
  const size_t rank = std::max<size_t>(
      1, static_cast<size_t>(std::ceil(percentile / 100.0 * d.size())));
  std::nth_element(d.begin(), d.begin() + (rank - 1), d.end());
  return d[rank - 1];
}

std::vector<std::vector<WorkerId>> ClusterWorkers(
    std::span<const WorkerProfile> workers, std::span<const WorkerId> ids,
    double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  std::vector<std::vector<WorkerId>> clusters;
  for (WorkerId u : ids) {
    bool placed = false;
    for (auto& cluster : clusters) {
      const bool close = std::all_of(cluster.begin(), cluster.end(), [&](WorkerId v) {
        return ProfileDistance(workers[u], workers[v]) <= alpha + kTolerance;
      });
      if (close) {
        cluster.push_back(u);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({u});
  }
  return clusters;
}

VirtualWorker MakeVirtualWorker(int id, std::vector<WorkerId> members,
                                std::span<const WorkerProfile> workers,
                                const ConstraintConfig& constraints) {
  if (members.empty()) throw std::invalid_argument("empty cluster");
  VirtualWorker v;
  v.id = id;
  const size_t m = workers[members[0]].skills.size();
  v.skills.assign(m, std::numeric_limits<double>::infinity());
  v.wage = 0.0;
  for (WorkerId u : members) {
    const WorkerProfile& w = workers[u];
    for (size_t j = 0; j < m; ++j) {
      v.skills[j] = std::min(v.skills[j], w.acceptance_ratio * w.skills[j]);
    }
    v.wage = std::max(v.wage, w.acceptance_ratio * w.wage);
  }
  v.members = std::move(members);
  v.capacity_max = v.size() * constraints.tasks_per_worker_max;
  v.capacity_min = v.size() * constraints.tasks_per_worker_min;
  return v;
}

int ClusterSet::Find(WorkerId worker) const {
  for (int c = 0; c < size(); ++c) {
    const auto& m = virtuals[c].members;
    if (std::find(m.begin(), m.end(), worker) != m.end()) return c;
  }
  return -1;
}

namespace {

void AppendClusters(ClusterSet& clusters, const Instance& instance,
                    std::span<const WorkerId> ids) {
  for (auto& members : ClusterWorkers(instance.workers, ids, clusters.alpha)) {
    clusters.virtuals.push_back(MakeVirtualWorker(
        clusters.next_id++, std::move(members), instance.workers,
        instance.constraints));
    clusters.cursors.push_back(0);
  }
}

}  // namespace

ClusterSet BuildClusterSet(const Instance& instance, double alpha) {
  ClusterSet clusters;
  clusters.alpha = alpha;
  std::vector<WorkerId> ids(instance.worker_count());
  for (WorkerId u = 0; u < instance.worker_count(); ++u) ids[u] = u;
  AppendClusters(clusters, instance, ids);
  return clusters;
}

void ClusterAddWorkers(ClusterSet& clusters, const Instance& instance,
                       std::span<const WorkerId> new_workers) {
  AppendClusters(clusters, instance, new_workers);
}

void ClusterRemoveOrUpdate(ClusterSet& clusters, const Instance& instance,
                           std::span<const WorkerId> removed,
                           std::span<const WorkerId> updated) {
  std::set<WorkerId> gone(removed.begin(), removed.end());
  std::set<int> dissolve;
  for (WorkerId u : gone) {
    if (int c = clusters.Find(u); c >= 0) dissolve.insert(c);
  }
  for (WorkerId u : updated) {
    if (int c = clusters.Find(u); c >= 0) dissolve.insert(c);
  }
  std::vector<WorkerId> regroup;
  ClusterSet kept;
  kept.alpha = clusters.alpha;
  kept.next_id = clusters.next_id;
  for (int c = 0; c < clusters.size(); ++c) {
    if (!dissolve.contains(c)) {
      kept.virtuals.push_back(clusters.virtuals[c]);
      kept.cursors.push_back(clusters.cursors[c]);
      continue;
    }
    for (WorkerId u : clusters.virtuals[c].members) {
      if (!gone.contains(u)) regroup.push_back(u);
    }
  }
  std::sort(regroup.begin(), regroup.end());
  AppendClusters(kept, instance, regroup);
  clusters = std::move(kept);
}

AssignmentProgram BuildCDexPlusProgram(const Instance& instance,
                                       const ClusterSet& clusters) {
  const ConstraintConfig& c = instance.constraints;
  if (c.tasks_per_worker_min > instance.task_count()) {
    throw InfeasibleProgram("X_l exceeds the number of tasks");
  }
  AssignmentProgram program;
  program.skill_count = instance.skill_count();
  program.weights = instance.weights;
  for (const TaskSpec& t : instance.workload.tasks) {
    program.tasks.push_back({t, Aggregates(instance.skill_count()), false});
  }
  for (const VirtualWorker& v : clusters.virtuals) {
    const int col = static_cast<int>(program.columns.size());
    program.columns.push_back(
        {v.id, true, v.skills, v.wage, v.capacity_min, v.capacity_max});
    for (int t = 0; t < instance.task_count(); ++t) {
      program.variables.push_back({col, t, v.size()});
    }
  }
  return program;
}

namespace {

bool Eligible(const AssignmentState& state, const Instance& instance,
              std::span<const char> allowed, WorkerId u, TaskId t) {
  return (allowed.empty() || allowed[u]) && state.available(u) &&
         state.load(u) < instance.constraints.tasks_per_worker_max &&
         !state.contains(t, u);
}

// Bipartite placement of demand units onto members by augmenting paths.
class Placement {
 public:
  Placement(std::span<const VirtualDemand> demand, const ClusterSet& clusters,
            const Instance& instance, const AssignmentState& state,
            std::span<const char> allowed)
      : demand_(demand), clusters_(clusters), instance_(instance),
        state_(state), allowed_(allowed) {}

  // Returns false when some unit cannot be placed.
  bool Solve(std::vector<std::pair<WorkerId, TaskId>>& out) {
    const int x_h = instance_.constraints.tasks_per_worker_max;
    for (size_t d = 0; d < demand_.size(); ++d) {
      for (int k = 0; k < demand_[d].units; ++k) slots_.push_back(static_cast<int>(d));
    }
    slot_worker_.assign(slots_.size(), -1);
    extra_load_.assign(instance_.worker_count(), 0);
    for (size_t s = 0; s < slots_.size(); ++s) {
      seen_.assign(instance_.worker_count(), 0);
      if (!Augment(static_cast<int>(s), x_h)) return false;
    }
    for (size_t s = 0; s < slots_.size(); ++s) {
      out.emplace_back(slot_worker_[s], demand_[slots_[s]].task);
    }
    return true;
  }

 private:
  bool Holds(WorkerId u, TaskId t, int except_slot) const {
    for (size_t s = 0; s < slots_.size(); ++s) {
      if (static_cast<int>(s) != except_slot && slot_worker_[s] == u &&
          demand_[slots_[s]].task == t) {
        return true;
      }
    }
    return false;
  }

  bool Augment(int slot, int x_h) {
    const VirtualDemand& d = demand_[slots_[slot]];
    for (WorkerId u : clusters_.virtuals[d.column].members) {
      if (seen_[u] || !Eligible(state_, instance_, allowed_, u, d.task)) continue;
      if (Holds(u, d.task, slot)) continue;
      seen_[u] = 1;
      if (state_.load(u) + extra_load_[u] < x_h) {
        slot_worker_[slot] = u;
        ++extra_load_[u];
        return true;
      }
      // u is full: try to move one of its other slots elsewhere.
      for (size_t s = 0; s < slots_.size(); ++s) {
        if (slot_worker_[s] != u) continue;
        slot_worker_[s] = -1;
        --extra_load_[u];
        if (Augment(static_cast<int>(s), x_h)) {
          slot_worker_[slot] = u;
          ++extra_load_[u];
          return true;
        }
        slot_worker_[s] = u;
        ++extra_load_[u];
      }
    }
    return false;
  }

  std::span<const VirtualDemand> demand_;
  const ClusterSet& clusters_;
  const Instance& instance_;
  const AssignmentState& state_;
  std::span<const char> allowed_;
  std::vector<int> slots_;
  std::vector<WorkerId> slot_worker_;
  std::vector<int> extra_load_;
  std::vector<char> seen_;
};

}  // namespace

std::vector<std::pair<WorkerId, TaskId>> Disintegrate(
    std::span<const VirtualDemand> demand, ClusterSet& clusters,
    const Instance& instance, AssignmentState& state,
    std::span<const char> allowed) {
  std::vector<VirtualDemand> order(demand.begin(), demand.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.task != b.task ? a.task < b.task : a.column < b.column;
  });
  for (const VirtualDemand& d : order) {
    if (d.units > clusters.virtuals.at(d.column).size()) {
      throw std::runtime_error("virtual multiplicity exceeds member count");
    }
  }

  std::vector<std::pair<WorkerId, TaskId>> added;
  const std::vector<int> saved_cursors = clusters.cursors;
  bool stuck = false;
  for (const VirtualDemand& d : order) {
    const auto& members = clusters.virtuals[d.column].members;
    const int n = static_cast<int>(members.size());
    int& cursor = clusters.cursors[d.column];
    int taken = 0;
    for (int step = 0; step < n && taken < d.units; ++step) {
      const WorkerId u = members[(cursor + step) % n];
      if (!Eligible(state, instance, allowed, u, d.task)) continue;
      state.Assign(u, d.task);
      added.emplace_back(u, d.task);
      ++taken;
      if (taken == d.units) cursor = (cursor + step + 1) % n;
    }
    if (taken < d.units) {
      stuck = true;
      break;
    }
  }
  if (stuck) {
    for (const auto& [u, t] : added) state.Unassign(u, t);
    clusters.cursors = saved_cursors;
    added.clear();
    Placement placement(order, clusters, instance, state, allowed);
    if (!placement.Solve(added)) {
      throw std::runtime_error("virtual assignment cannot be disintegrated");
    }
    for (const auto& [u, t] : added) state.Assign(u, t);
  }
  std::set<TaskId> touched;
  for (const auto& [u, t] : added) touched.insert(t);
  for (TaskId t : touched) RefreshIndex(state, instance, t);
  return added;
}

namespace {

int ClusterIndexOfId(const ClusterSet& clusters, int id) {
  for (int c = 0; c < clusters.size(); ++c) {
    if (clusters.virtuals[c].id == id) return c;
  }
  throw std::logic_error("unknown virtual id " + std::to_string(id));
}

std::vector<VirtualDemand> DemandOf(const AssignmentProgram& program,
                                    const SolveResult& result,
                                    const ClusterSet& clusters) {
  std::vector<VirtualDemand> demand;
  if (!result.has_solution()) return demand;
  for (int v = 0; v < program.variable_count(); ++v) {
    if (result.assignment[v] == 0) continue;
    const ProgramVariable& var = program.variables[v];
    demand.push_back({ClusterIndexOfId(clusters, program.columns[var.column].id),
                      program.tasks[var.task].spec.id, result.assignment[v]});
  }
  return demand;
}

struct MarginalScope {
  std::vector<TaskId> tasks;
  bool must_be_satisfied = false;
  std::vector<char> allowed;   // by worker id
  bool members_need_minimum = false;
};

// Virtual columns restricted to allowed, eligible members.
AssignmentProgram BuildVirtualMarginal(const AssignmentState& state,
                                       const Instance& instance,
                                       const ClusterSet& clusters,
                                       const MarginalScope& scope) {
  AssignmentProgram program;
  program.skill_count = instance.skill_count();
  program.weights = instance.weights;
  for (TaskId t : scope.tasks) {
    program.tasks.push_back(
        {instance.workload.tasks.at(t),
         ExpectedAggregates(state.workers_of(t), instance.workers,
                            instance.skill_count()),
         scope.must_be_satisfied});
  }
  const ConstraintConfig& c = instance.constraints;
  for (const VirtualWorker& v : clusters.virtuals) {
    std::vector<WorkerId> candidates;
    int room = 0;
    for (WorkerId u : v.members) {
      if (!scope.allowed[u] || !state.available(u)) continue;
      if (state.load(u) >= c.tasks_per_worker_max) continue;
      candidates.push_back(u);
      room += c.tasks_per_worker_max - state.load(u);
    }
    if (candidates.empty()) continue;
    const int col = static_cast<int>(program.columns.size());
    const int minimum =
        scope.members_need_minimum
            ? static_cast<int>(candidates.size()) * c.tasks_per_worker_min
            : 0;
    program.columns.push_back({v.id, true, v.skills, v.wage, minimum, room});
    for (int k = 0; k < static_cast<int>(scope.tasks.size()); ++k) {
      int upper = 0;
      for (WorkerId u : candidates) upper += !state.contains(scope.tasks[k], u);
      if (upper > 0) program.variables.push_back({col, k, upper});
    }
  }
  return program;
}

MaintenanceResult SolveVirtual(AssignmentState& state, ClusterSet& clusters,
                               const Instance& instance,
                               const MarginalScope& scope, double value_before,
                               const SolveOptions& options) {
  MaintenanceResult out;
  out.value_before = value_before;
  const AssignmentProgram program =
      BuildVirtualMarginal(state, instance, clusters, scope);
  out.solve = Solve(program, options);
  Disintegrate(DemandOf(program, out.solve, clusters), clusters, instance, state,
               scope.allowed);
  for (TaskId t : scope.tasks) RefreshIndex(state, instance, t);
  out.value_after = GlobalValue(state, instance);
  return out;
}

}  // namespace

CDexPlusDesign DesignCDexPlus(const Instance& instance, double alpha,
                              const SolveOptions& options) {
  CDexPlusDesign design;
  design.clusters = BuildClusterSet(instance, alpha);
  design.program = BuildCDexPlusProgram(instance, design.clusters);
  design.solve = Solve(design.program, options);
  design.state = AssignmentState(instance.worker_count(), instance.task_count());
  Disintegrate(DemandOf(design.program, design.solve, design.clusters),
               design.clusters, instance, design.state);
  RefreshIndexes(design.state, instance);
  design.virtual_value = design.solve.has_solution() ? design.solve.objective : 0.0;
  design.actual_value = GlobalValue(design.state, instance);
  return design;
}

MaintenanceResult ReplaceWorkersCDexPlus(AssignmentState& state,
                                         ClusterSet& clusters,
                                         const Instance& instance, TaskId task,
                                         std::span<const WorkerId> unavailable,
                                         std::span<const WorkerId> pool,
                                         const SolveOptions& options) {
  const double before = GlobalValue(state, instance);
  std::set<WorkerId> leaving(unavailable.begin(), unavailable.end());
  for (WorkerId u : leaving) {
    if (state.contains(task, u)) state.Unassign(u, task);
  }
  RefreshIndex(state, instance, task);
  MarginalScope scope;
  scope.tasks = {task};
  scope.must_be_satisfied = !leaving.empty();
  scope.allowed.assign(instance.worker_count(), 0);
  if (!leaving.empty()) {
    for (WorkerId u : pool) {
      if (!leaving.contains(u)) scope.allowed.at(u) = 1;
    }
  }
  return SolveVirtual(state, clusters, instance, scope, before, options);
}

MaintenanceResult FillTaskCDexPlus(AssignmentState& state, ClusterSet& clusters,
                                   const Instance& instance, TaskId task,
                                   std::span<const WorkerId> pool,
                                   const SolveOptions& options) {
  const double before = GlobalValue(state, instance);
  MarginalScope scope;
  scope.tasks = {task};
  scope.must_be_satisfied = true;
  scope.allowed.assign(instance.worker_count(), 0);
  for (WorkerId u : pool) scope.allowed.at(u) = 1;
  return SolveVirtual(state, clusters, instance, scope, before, options);
}

MaintenanceResult AddWorkersCDexPlus(AssignmentState& state, ClusterSet& clusters,
                                     const Instance& instance,
                                     std::span<const WorkerId> new_workers,
                                     const SolveOptions& options) {
  state.EnsureWorkers(instance.worker_count());
  const double before = GlobalValue(state, instance);
  ClusterAddWorkers(clusters, instance, new_workers);
  MarginalScope scope;
  for (TaskId t = 0; t < instance.task_count(); ++t) scope.tasks.push_back(t);
  scope.allowed.assign(instance.worker_count(), 0);
  for (WorkerId u : new_workers) scope.allowed.at(u) = 1;
  return SolveVirtual(state, clusters, instance, scope, before, options);
}

MaintenanceResult DeleteWorkersCDexPlus(AssignmentState& state,
                                        ClusterSet& clusters,
                                        const Instance& instance,
                                        std::span<const WorkerId> deleted,
                                        const SolveOptions& options) {
  const double before = GlobalValue(state, instance);
  std::set<TaskId> affected;
  for (WorkerId u : deleted) {
    for (TaskId t : state.UnassignEverywhere(u)) affected.insert(t);
    state.set_available(u, false);
  }
  ClusterRemoveOrUpdate(clusters, instance, deleted, {});
  MarginalScope scope;
  scope.tasks.assign(affected.begin(), affected.end());
  for (TaskId t : scope.tasks) RefreshIndex(state, instance, t);
  scope.allowed.assign(instance.worker_count(), 1);
  return SolveVirtual(state, clusters, instance, scope, before, options);
}

MaintenanceResult UpdateWorkersCDexPlus(AssignmentState& state,
                                        ClusterSet& clusters,
                                        const Instance& instance,
                                        std::span<const WorkerId> updated,
                                        const SolveOptions& options) {
  const double before = GlobalValue(state, instance);
  for (WorkerId u : updated) state.UnassignEverywhere(u);
  RefreshIndexes(state, instance);
  ClusterRemoveOrUpdate(clusters, instance, {}, updated);
  MarginalScope scope;
  for (TaskId t = 0; t < instance.task_count(); ++t) scope.tasks.push_back(t);
  scope.allowed.assign(instance.worker_count(), 0);
  for (WorkerId u : updated) scope.allowed.at(u) = 1;
  scope.members_need_minimum = true;
  return SolveVirtual(state, clusters, instance, scope, before, options);
}

void WriteClusterCsv(const ClusterSet& clusters, std::ostream& out) {
  out << "virtual_id,members,skills,wage,capacity_min,capacity_max\n";
  char buf[64];
  for (const VirtualWorker& v : clusters.virtuals) {
    out << v.id << ',';
    for (size_t i = 0; i < v.members.size(); ++i) {
      out << (i ? ";" : "") << v.members[i];
    }
    out << ',';
    for (size_t j = 0; j < v.skills.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%s%.6f", j ? ";" : "", v.skills[j]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.6f,%d,%d\n", v.wage, v.capacity_min,
                  v.capacity_max);
    out << buf;
  }
}

}  // namespace smartcrowd
