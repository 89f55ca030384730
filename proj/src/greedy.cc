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

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace smartcrowd {

const char* ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kNotConsidered:
      return "not_considered";
    case StopReason::kNoPositiveGain:
      return "no_positive_gain";
    case StopReason::kBudget:
      return "budget";
    case StopReason::kNoCandidates:
      return "no_candidates";
    case StopReason::kUnreachable:
      return "unreachable";
  }
  return "unknown";
}

double MarginalGain(const AssignmentState& state, const Instance& instance,
                    WorkerId worker, TaskId task) {
  const TaskSpec& spec = instance.workload.tasks.at(task);
  Aggregates agg = ExpectedAggregates(state.workers_of(task), instance.workers,
                                      instance.skill_count());
  const double before = EvaluateTask(agg, spec, instance.weights).value;
  agg.Add(instance.workers.at(worker));
  return EvaluateTask(agg, spec, instance.weights).value - before;
}

namespace {

class Engine {
 public:
  Engine(AssignmentState& state, const Instance& instance,
         std::vector<WorkerId> movable, std::vector<TaskId> tasks)
      : state_(state), instance_(instance), movable_(std::move(movable)),
        tasks_(std::move(tasks)) {
    state_.EnsureWorkers(instance_.worker_count());
    trace_.stop_reasons.assign(instance_.task_count(), StopReason::kNotConsidered);
    running_ = GlobalValue(state_, instance_);
    agg_.resize(instance_.task_count());
    value_.assign(instance_.task_count(), 0.0);
    feasible_.assign(instance_.task_count(), 0);
    for (TaskId t : tasks_) Recompute(t);
    gain_.assign(movable_.size() * tasks_.size(), 0.0);
    valid_.assign(movable_.size() * tasks_.size(), 0);
  }

  void Run();
  void RepairMinimum();
  GreedyTrace Finish();

 private:
  const WorkerProfile& worker(int i) const { return instance_.workers[movable_[i]]; }
  const TaskSpec& task(int k) const { return instance_.workload.tasks[tasks_[k]]; }
  size_t Slot(int i, int k) const { return i * tasks_.size() + k; }

  void Recompute(TaskId t);
  bool Eligible(int i, int k) const;
  bool Fits(int i, int k) const;
  double Gain(int i, int k);
  double RelaxedGain(int i, int k) const;
  bool ReducesDeficit(int i, int k) const;
  bool Reachable(int k) const;
  void Apply(int i, int k, double gain, bool toward_threshold);

  AssignmentState& state_;
  const Instance& instance_;
  std::vector<WorkerId> movable_;
  std::vector<TaskId> tasks_;
  std::vector<Aggregates> agg_;
  std::vector<double> value_;
  std::vector<char> feasible_;
  std::vector<double> gain_;
  std::vector<char> valid_;
  double running_ = 0.0;
  GreedyTrace trace_;
};

void Engine::Recompute(TaskId t) {
  agg_[t] = ExpectedAggregates(state_.workers_of(t), instance_.workers,
                               instance_.skill_count());
  const TaskValueBreakdown b =
      EvaluateTask(agg_[t], instance_.workload.tasks[t], instance_.weights);
  value_[t] = b.value;
  feasible_[t] = b.feasible;
}

bool Engine::Eligible(int i, int k) const {
  const WorkerId u = movable_[i];
  return state_.available(u) &&
         state_.load(u) < instance_.constraints.tasks_per_worker_max &&
         !state_.contains(tasks_[k], u);
}

bool Engine::Fits(int i, int k) const {
  const TaskSpec& spec = task(k);
  if (spec.max_cost <= 0.0) return false;
  const WorkerProfile& w = worker(i);
  return agg_[tasks_[k]].cost + w.acceptance_ratio * w.wage <=
         spec.max_cost + kTolerance;
}

double Engine::Gain(int i, int k) {
  const size_t slot = Slot(i, k);
  if (!valid_[slot]) {
    Aggregates after = agg_[tasks_[k]];
    after.Add(worker(i));
    gain_[slot] =
        EvaluateTask(after, task(k), instance_.weights).value - value_[tasks_[k]];
    valid_[slot] = 1;
    ++trace_.pair_evaluations;
  }
  return gain_[slot];
}

double Engine::RelaxedGain(int i, int k) const {
  const WorkerProfile& w = worker(i);
  double quality = 0.0;
  for (double s : w.skills) quality += w.acceptance_ratio * s;
  return instance_.weights.w1 * quality -
         instance_.weights.w2 * w.acceptance_ratio * w.wage / task(k).max_cost;
}

bool Engine::ReducesDeficit(int i, int k) const {
  const Aggregates& a = agg_[tasks_[k]];
  const WorkerProfile& w = worker(i);
  for (int j = 0; j < instance_.skill_count(); ++j) {
    if (a.quality[j] < task(k).quality_thresholds[j] - kTolerance &&
        w.acceptance_ratio * w.skills[j] > 0.0) {
      return true;
    }
  }
  return false;
}

// Fractional check: can the eligible workers close every deficit of task k
// within its remaining budget?
bool Engine::Reachable(int k) const {
  const Aggregates& a = agg_[tasks_[k]];
  const TaskSpec& spec = task(k);
  const double budget = spec.max_cost + kTolerance - a.cost;
  for (int j = 0; j < instance_.skill_count(); ++j) {
    const double deficit = spec.quality_thresholds[j] - a.quality[j];
    if (deficit <= kTolerance) continue;
    std::vector<std::pair<double, double>> items;  // (quality, cost)
    for (int i = 0; i < static_cast<int>(movable_.size()); ++i) {
      if (!Eligible(i, k)) continue;
      const WorkerProfile& w = worker(i);
      const double q = w.acceptance_ratio * w.skills[j];
      if (q > 0.0) items.emplace_back(q, w.acceptance_ratio * w.wage);
    }
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
      return x.first * y.second > y.first * x.second;
    });
    double reach = 0.0, left = budget;
    for (const auto& [q, c] : items) {
      if (c <= 0.0) {
        reach += q;
        continue;
      }
      if (left <= 0.0) break;
      const double take = std::min(1.0, left / c);
      reach += take * q;
      left -= take * c;
    }
    if (reach < deficit - kTolerance) return false;
  }
  return true;
}

void Engine::Apply(int i, int k, double gain, bool toward_threshold) {
  const TaskId t = tasks_[k];
  const bool was_feasible = feasible_[t];
  state_.Assign(movable_[i], t);
  Recompute(t);
  running_ += gain;
  trace_.steps.push_back({movable_[i], t, gain, running_, toward_threshold});
  // Gains on a task that stays feasible are the fixed linear coefficients, so
  // the cache only goes stale when the task is (or was) below threshold.
  if (!(was_feasible && feasible_[t])) {
    for (int w = 0; w < static_cast<int>(movable_.size()); ++w) valid_[Slot(w, k)] = 0;
  }
}

void Engine::Run() {
  const int n = static_cast<int>(movable_.size());
  const int k_count = static_cast<int>(tasks_.size());
  while (true) {
    int best_i = -1, best_k = -1;
    double best = kTolerance;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < k_count; ++k) {
        if (!Eligible(i, k) || !Fits(i, k)) continue;
        const double g = Gain(i, k);
        if (g > best) {
          best = g;
          best_i = i;
          best_k = k;
        }
      }
    }
    if (best_i >= 0) {
      Apply(best_i, best_k, best, false);
      continue;
    }

    std::vector<char> reachable(k_count, 0);
    for (int k = 0; k < k_count; ++k) {
      reachable[k] = !feasible_[tasks_[k]] && Reachable(k);
    }
    double best_relaxed = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < k_count; ++k) {
        if (!reachable[k] || !Eligible(i, k) || !Fits(i, k) ||
            !ReducesDeficit(i, k)) {
          continue;
        }
        const double r = RelaxedGain(i, k);
        if (best_i < 0 || r > best_relaxed) {
          best_relaxed = r;
          best_i = i;
          best_k = k;
        }
      }
    }
    if (best_i < 0) break;
    Apply(best_i, best_k, Gain(best_i, best_k), true);
  }
}

void Engine::RepairMinimum() {
  const int x_l = instance_.constraints.tasks_per_worker_min;
  for (int i = 0; i < static_cast<int>(movable_.size()); ++i) {
    const WorkerId u = movable_[i];
    if (!state_.available(u)) continue;
    while (state_.load(u) < x_l) {
      int best_k = -1;
      double best = 0.0;
      for (int k = 0; k < static_cast<int>(tasks_.size()); ++k) {
        if (!Eligible(i, k) || !Fits(i, k)) continue;
        const double g = Gain(i, k);
        if (best_k < 0 || g > best) {
          best = g;
          best_k = k;
        }
      }
      if (best_k < 0) {
        trace_.below_minimum.push_back(u);
        break;
      }
      Apply(i, best_k, best, false);
    }
  }
}

GreedyTrace Engine::Finish() {
  for (int k = 0; k < static_cast<int>(tasks_.size()); ++k) {
    bool eligible = false, fits = false;
    for (int i = 0; i < static_cast<int>(movable_.size()); ++i) {
      if (!Eligible(i, k)) continue;
      eligible = true;
      if (Fits(i, k)) fits = true;
    }
    StopReason reason;
    if (!eligible) {
      reason = StopReason::kNoCandidates;
    } else if (!fits) {
      reason = StopReason::kBudget;
    } else if (!feasible_[tasks_[k]]) {
      reason = StopReason::kUnreachable;
    } else {
      reason = StopReason::kNoPositiveGain;
    }
    trace_.stop_reasons[tasks_[k]] = reason;
  }
  for (TaskId t : tasks_) RefreshIndex(state_, instance_, t);
  return trace_;
}

std::vector<TaskId> AllTasks(const Instance& instance) {
  std::vector<TaskId> tasks(instance.task_count());
  for (TaskId t = 0; t < instance.task_count(); ++t) tasks[t] = t;
  return tasks;
}

std::vector<WorkerId> SortedUnique(std::span<const WorkerId> ids,
                                   const Instance& instance) {
  std::set<WorkerId> out;
  for (WorkerId u : ids) {
    if (u < 0 || u >= instance.worker_count()) {
      throw std::out_of_range("unknown worker id " + std::to_string(u));
    }
    out.insert(u);
  }
  return {out.begin(), out.end()};
}

}  // namespace

GreedyResult OfflineGreedyDesign(const Instance& instance) {
  GreedyResult result{AssignmentState(instance.worker_count(), instance.task_count()),
                      {}};
  std::vector<WorkerId> everyone(instance.worker_count());
  for (WorkerId u = 0; u < instance.worker_count(); ++u) everyone[u] = u;
  Engine engine(result.state, instance, everyone, AllTasks(instance));
  engine.Run();
  engine.RepairMinimum();
  result.trace = engine.Finish();
  return result;
}

GreedyTrace OnlineGreedyReplace(AssignmentState& state, const Instance& instance,
                                TaskId task,
                                std::span<const WorkerId> unavailable,
                                std::span<const WorkerId> pool) {
  const std::vector<WorkerId> leaving = SortedUnique(unavailable, instance);
  for (WorkerId u : leaving) {
    if (state.contains(task, u)) state.Unassign(u, task);
  }
  std::vector<WorkerId> candidates;
  for (WorkerId u : SortedUnique(pool, instance)) {
    if (!std::binary_search(leaving.begin(), leaving.end(), u)) {
      candidates.push_back(u);
    }
  }
  Engine engine(state, instance, candidates, {task});
  engine.Run();
  return engine.Finish();
}

GreedyTrace GreedyAddWorkers(AssignmentState& state, const Instance& instance,
                             std::span<const WorkerId> new_workers) {
  state.EnsureWorkers(instance.worker_count());
  const std::vector<WorkerId> added = SortedUnique(new_workers, instance);
  for (WorkerId u : added) {
    if (state.load(u) > 0) {
      throw std::invalid_argument("worker " + std::to_string(u) +
                                  " already holds tasks");
    }
  }
  Engine engine(state, instance, added, AllTasks(instance));
  engine.Run();
  return engine.Finish();
}

GreedyTrace GreedyDeleteWorkers(AssignmentState& state, const Instance& instance,
                                std::span<const WorkerId> deleted) {
  const std::vector<WorkerId> gone = SortedUnique(deleted, instance);
  state.EnsureWorkers(instance.worker_count());
  std::set<TaskId> affected;
  for (WorkerId u : gone) {
    for (TaskId t : state.UnassignEverywhere(u)) affected.insert(t);
    state.set_available(u, false);
  }
  std::vector<WorkerId> pool;
  for (WorkerId u = 0; u < instance.worker_count(); ++u) {
    if (state.available(u)) pool.push_back(u);
  }
  GreedyTrace combined;
  combined.stop_reasons.assign(instance.task_count(), StopReason::kNotConsidered);
  for (TaskId t = 0; t < instance.task_count(); ++t) {
    if (!affected.contains(t)) continue;
    const GreedyTrace part = OnlineGreedyReplace(state, instance, t, {}, pool);
    combined.steps.insert(combined.steps.end(), part.steps.begin(), part.steps.end());
    combined.stop_reasons[t] = part.stop_reasons[t];
    combined.pair_evaluations += part.pair_evaluations;
  }
  return combined;
}

GreedyTrace GreedyUpdateWorkers(AssignmentState& state, const Instance& instance,
                                std::span<const WorkerId> updated) {
  const std::vector<WorkerId> changed = SortedUnique(updated, instance);
  state.EnsureWorkers(instance.worker_count());
  for (WorkerId u : changed) state.UnassignEverywhere(u);
  Engine engine(state, instance, changed, AllTasks(instance));
  engine.Run();
  engine.RepairMinimum();
  return engine.Finish();
}

void WriteTraceCsv(const GreedyTrace& trace, std::ostream& out) {
  out << "step,worker,task,gain,running_value\n";
  char buf[128];
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const GreedyStep& s = trace.steps[i];
    std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.9f,%.9f\n", i + 1, s.worker,
                  s.task, s.gain, s.running_value);
    out << buf;
  }
}

}  // namespace smartcrowd
