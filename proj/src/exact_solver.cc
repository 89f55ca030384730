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

// Depth-first branch and bound over the integer variables of an
// AssignmentProgram.
//
// The bound of a node is the sum of per-task bounds. A task's bound is 0 when
// its fixed cost already exceeds the budget or when some skill deficit cannot
// be closed by undecided variables within the remaining budget (fractional
// knapsack per skill). Otherwise it is the task's value at the fixed part plus
// a fractional knapsack of the positive per-unit gains
// W1 * sum(q) - W2 * c / W over the remaining budget.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smartcrowd/exact.h"

namespace smartcrowd {

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kBudgetExhausted:
      return "budget_exhausted";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kPruneSlack = 1e-12;

struct TaskBound {
  double value = 0.0;
  bool can_satisfy = false;
};

class Search {
 public:
  Search(const AssignmentProgram& program, const SolveOptions& options);
  SolveResult Run();

 private:
  int EffectiveUpper(int v) const;
  TaskBound ComputeBound(int t) const;
  double CurrentValue(int t) const;
  double TotalBound();
  bool RequiredReachable() const;
  bool ColumnFeasible(int c) const;
  void Set(int v, int x);
  void Unset(int v);
  void MarkColumnTasks(int c);
  int SelectVariable();
  void Leaf();
  void Dfs();
  void SeedFromHint();

  const AssignmentProgram& p_;
  const SolveOptions& options_;
  int task_count_ = 0;
  std::vector<double> gain_;
  std::vector<std::vector<int>> by_gain_;                // per task
  std::vector<std::vector<std::vector<int>>> by_skill_;  // per task, skill
  std::vector<std::vector<int>> column_vars_;
  std::vector<int> column_max_upper_;

  std::vector<int> value_;  // -1 while undecided
  std::vector<Aggregates> agg_;
  std::vector<int> column_count_;
  std::vector<int> column_open_;  // summed upper of undecided variables
  std::vector<TaskBound> bound_;
  std::vector<char> dirty_;
  std::vector<Aggregates> saved_;  // one per depth

  bool found_ = false;
  double incumbent_ = -std::numeric_limits<double>::infinity();
  std::vector<int> best_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
};

Search::Search(const AssignmentProgram& program, const SolveOptions& options)
    : p_(program), options_(options) {
  task_count_ = static_cast<int>(p_.tasks.size());
  const int n = p_.variable_count();
  const int m = p_.skill_count;
  gain_.resize(n);
  by_gain_.resize(task_count_);
  by_skill_.assign(task_count_, std::vector<std::vector<int>>(m));
  column_vars_.resize(p_.columns.size());
  column_max_upper_.assign(p_.columns.size(), 0);
  for (int v = 0; v < n; ++v) {
    const ProgramVariable& var = p_.variables[v];
    const ProgramColumn& col = p_.columns[var.column];
    const double budget = p_.tasks[var.task].spec.max_cost;
    const double q = std::accumulate(col.quality.begin(), col.quality.end(), 0.0);
    gain_[v] = p_.weights.w1 * q -
               (budget > 0.0 ? p_.weights.w2 * col.cost / budget : 0.0);
    by_gain_[var.task].push_back(v);
    for (int j = 0; j < m; ++j) {
      if (col.quality[j] > 0.0) by_skill_[var.task][j].push_back(v);
    }
    column_vars_[var.column].push_back(v);
    column_max_upper_[var.column] =
        std::max(column_max_upper_[var.column], var.upper);
  }
  // Best ratio first; free positive items lead, non-positive items trail.
  auto ratio = [](double numerator, double cost) {
    return cost > 0.0 ? numerator / cost : std::numeric_limits<double>::infinity();
  };
  for (int t = 0; t < task_count_; ++t) {
    std::stable_sort(by_gain_[t].begin(), by_gain_[t].end(), [&](int a, int b) {
      const bool pa = gain_[a] > 0.0, pb = gain_[b] > 0.0;
      if (pa != pb) return pa;
      if (!pa) return gain_[a] > gain_[b];
      return ratio(gain_[a], p_.columns[p_.variables[a].column].cost) >
             ratio(gain_[b], p_.columns[p_.variables[b].column].cost);
    });
    for (int j = 0; j < m; ++j) {
      std::stable_sort(by_skill_[t][j].begin(), by_skill_[t][j].end(),
                       [&](int a, int b) {
                         const ProgramColumn& ca = p_.columns[p_.variables[a].column];
                         const ProgramColumn& cb = p_.columns[p_.variables[b].column];
                         return ratio(ca.quality[j], ca.cost) >
                                ratio(cb.quality[j], cb.cost);
                       });
    }
  }

  value_.assign(n, -1);
  for (const ProgramTask& t : p_.tasks) agg_.push_back(t.base);
  column_count_.assign(p_.columns.size(), 0);
  column_open_.assign(p_.columns.size(), 0);
  for (int v = 0; v < n; ++v) column_open_[p_.variables[v].column] += p_.variables[v].upper;
  bound_.resize(task_count_);
  dirty_.assign(task_count_, 1);
  saved_.reserve(n + 1);
}

int Search::EffectiveUpper(int v) const {
  const ProgramVariable& var = p_.variables[v];
  if (value_[v] >= 0) return 0;
  return std::min(var.upper,
                  p_.columns[var.column].max_total - column_count_[var.column]);
}

double Search::CurrentValue(int t) const {
  return EvaluateTask(agg_[t], p_.tasks[t].spec, p_.weights).value;
}

TaskBound Search::ComputeBound(int t) const {
  const ProgramTask& task = p_.tasks[t];
  const Aggregates& a = agg_[t];
  const double budget_total = task.spec.max_cost;
  if (budget_total <= 0.0) {
    const TaskValueBreakdown b = EvaluateTask(a, task.spec, p_.weights);
    return {b.value, b.feasible};
  }
  if (a.cost > budget_total + kTolerance) return {0.0, false};
  const double budget = budget_total + kTolerance - a.cost;

  for (int j = 0; j < p_.skill_count; ++j) {
    const double deficit = task.spec.quality_thresholds[j] - a.quality[j];
    if (deficit <= kTolerance) continue;
    double reach = 0.0, left = budget;
    for (int v : by_skill_[t][j]) {
      const int ub = EffectiveUpper(v);
      if (ub <= 0) continue;
      const ProgramColumn& col = p_.columns[p_.variables[v].column];
      if (col.cost <= 0.0) {
        reach += ub * col.quality[j];
        continue;
      }
      if (left <= 0.0) break;
      const double take = std::min<double>(ub, left / col.cost);
      reach += take * col.quality[j];
      left -= take * col.cost;
    }
    if (reach < deficit - kTolerance) return {0.0, false};
  }

  double quality = 0.0;
  for (double q : a.quality) quality += q;
  double value =
      p_.weights.w1 * quality + p_.weights.w2 * (1.0 - a.cost / budget_total);
  double left = budget;
  for (int v : by_gain_[t]) {
    if (gain_[v] <= 0.0) break;
    const int ub = EffectiveUpper(v);
    if (ub <= 0) continue;
    const double cost = p_.columns[p_.variables[v].column].cost;
    if (cost <= 0.0) {
      value += ub * gain_[v];
      continue;
    }
    if (left <= 0.0) break;
    const double take = std::min<double>(ub, left / cost);
    value += take * gain_[v];
    left -= take * cost;
  }
  return {std::max(value, 0.0), true};
}

double Search::TotalBound() {
  double total = 0.0;
  for (int t = 0; t < task_count_; ++t) {
    if (dirty_[t]) {
      bound_[t] = ComputeBound(t);
      dirty_[t] = 0;
    }
    total += bound_[t].value;
  }
  return total;
}

bool Search::RequiredReachable() const {
  for (int t = 0; t < task_count_; ++t) {
    if (p_.tasks[t].must_be_satisfied && !bound_[t].can_satisfy) return false;
  }
  return true;
}

bool Search::ColumnFeasible(int c) const {
  const ProgramColumn& col = p_.columns[c];
  const int reachable =
      column_count_[c] + std::min(column_open_[c], col.max_total - column_count_[c]);
  return column_count_[c] <= col.max_total && reachable >= col.min_total;
}

void Search::MarkColumnTasks(int c) {
  for (int w : column_vars_[c]) {
    if (value_[w] < 0) dirty_[p_.variables[w].task] = 1;
  }
}

void Search::Set(int v, int x) {
  const ProgramVariable& var = p_.variables[v];
  const ProgramColumn& col = p_.columns[var.column];
  saved_.push_back(agg_[var.task]);
  value_[v] = x;
  column_open_[var.column] -= var.upper;
  dirty_[var.task] = 1;
  if (x > 0) {
    Aggregates& a = agg_[var.task];
    for (int j = 0; j < p_.skill_count; ++j) a.quality[j] += x * col.quality[j];
    a.cost += x * col.cost;
    a.count += x;
    column_count_[var.column] += x;
    if (col.max_total - column_count_[var.column] <
        column_max_upper_[var.column]) {
      MarkColumnTasks(var.column);
    }
  }
}

void Search::Unset(int v) {
  const ProgramVariable& var = p_.variables[v];
  const int x = value_[v];
  agg_[var.task] = std::move(saved_.back());
  saved_.pop_back();
  value_[v] = -1;
  column_open_[var.column] += var.upper;
  column_count_[var.column] -= x;
  dirty_[var.task] = 1;
  if (x > 0) MarkColumnTasks(var.column);
}

int Search::SelectVariable() {
  int best_var = -1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < task_count_; ++t) {
    int first = -1;
    for (int v : by_gain_[t]) {
      if (value_[v] >= 0) continue;
      if (EffectiveUpper(v) > 0) {
        first = v;
        break;
      }
    }
    if (first < 0) continue;
    const double gap = bound_[t].value - CurrentValue(t);
    if (gap > best_gap) {
      best_gap = gap;
      best_var = first;
    }
  }
  return best_var;
}

void Search::Leaf() {
  for (size_t c = 0; c < p_.columns.size(); ++c) {
    if (column_count_[c] < p_.columns[c].min_total) return;
  }
  double total = 0.0;
  for (int t = 0; t < task_count_; ++t) {
    const TaskValueBreakdown b = EvaluateTask(agg_[t], p_.tasks[t].spec, p_.weights);
    if (p_.tasks[t].must_be_satisfied && !b.feasible) return;
    total += b.value;
  }
  if (!found_ || total > incumbent_ + kPruneSlack) {
    found_ = true;
    incumbent_ = total;
    best_ = value_;
    for (int& x : best_) x = std::max(x, 0);
  }
}

void Search::SeedFromHint() {
  std::vector<char> satisfied;
  double total;
  try {
    total = EvaluateAssignment(p_, options_.hint, &satisfied);
  } catch (const std::invalid_argument&) {
    return;
  }
  for (int t = 0; t < task_count_; ++t) {
    if (p_.tasks[t].must_be_satisfied && !satisfied[t]) return;
  }
  found_ = true;
  incumbent_ = total;
  best_ = options_.hint;
}

void Search::Dfs() {
  if (++nodes_ > options_.node_limit) {
    aborted_ = true;
    return;
  }
  const double bound = TotalBound();
  if (found_ && bound <= incumbent_ + kPruneSlack) return;
  if (!RequiredReachable()) return;
  const int v = SelectVariable();
  if (v < 0) {
    Leaf();
    return;
  }
  const ProgramVariable& var = p_.variables[v];
  const int column = var.column;
  const int upper = EffectiveUpper(v);

  struct Child {
    int x;
    double bound;
  };
  std::vector<Child> children;
  for (int x = 0; x <= upper; ++x) {
    Set(v, x);
    if (ColumnFeasible(column)) {
      const double b = TotalBound();
      if (RequiredReachable()) children.push_back({x, b});
    }
    Unset(v);
  }
  const bool want_more = column_count_[column] < p_.columns[column].min_total;
  std::stable_sort(children.begin(), children.end(),
                   [&](const Child& a, const Child& b) {
                     if (std::abs(a.bound - b.bound) > kPruneSlack) {
                       return a.bound > b.bound;
                     }
                     return want_more ? a.x > b.x : a.x < b.x;
                   });
  for (const Child& child : children) {
    if (aborted_) return;
    if (found_ && child.bound <= incumbent_ + kPruneSlack) break;
    Set(v, child.x);
    Dfs();
    Unset(v);
  }
}

SolveResult Search::Run() {
  SolveResult result;
  for (const auto& [v, x] : p_.frozen) Set(v, x);
  bool feasible = true;
  for (size_t c = 0; c < p_.columns.size(); ++c) {
    if (!ColumnFeasible(static_cast<int>(c))) feasible = false;
  }
  result.root_bound = TotalBound();
  if (feasible && !options_.hint.empty()) SeedFromHint();
  if (feasible) Dfs();
  result.nodes = nodes_;
  result.found = found_;
  if (found_) {
    result.assignment = best_;
    result.objective = EvaluateAssignment(p_, best_, &result.task_satisfied);
  }
  if (aborted_) {
    result.status = SolveStatus::kBudgetExhausted;
  } else {
    result.status = found_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    result.proven_optimal = found_;
  }
  return result;
}

}  // namespace

SolveResult Solve(const AssignmentProgram& program, const SolveOptions& options) {
  return Search(program, options).Run();
}

}  // namespace smartcrowd
