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

// Exact index design and maintenance.
//
// Every problem (initial design, replacement, addition, deletion, profile
// update, and the virtual-worker design) is expressed as one AssignmentProgram:
// a set of columns (workers or virtual workers) with per-column cardinality
// bounds, a set of tasks carrying residual aggregates from workers that are
// not part of the program, and integer decision variables x[column, task] in
// [0, upper]. Ordinary workers have upper = 1.
//
// The zero branch of the task value is modelled with one indicator per task:
// the quality and cost rows are big-M conditional on it and the value term is
// multiplied by it. The branch-and-bound solver works on that structure
// directly; WriteLpFile emits the linearized form for external solvers.

#ifndef SMARTCROWD_EXACT_H_
#define SMARTCROWD_EXACT_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smartcrowd/model.h"
#include "smartcrowd/objective.h"

namespace smartcrowd {

class InfeasibleProgram : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProgramTask {
  TaskSpec spec;
  Aggregates base;  // contribution of workers outside the program
  // Replacement programs insist on a satisfied task; otherwise a task may
  // end with value 0.
  bool must_be_satisfied = false;
};

struct ProgramColumn {
  int id = 0;  // worker id, or virtual-worker id when is_virtual
  bool is_virtual = false;
  std::vector<double> quality;  // expected skill contribution per unit
  double cost = 0.0;            // expected wage per unit
  int min_total = 0;            // bounds on the column's summed variables
  int max_total = 0;
};

struct ProgramVariable {
  int column = 0;  // index into columns
  int task = 0;    // index into tasks
  int upper = 1;
};

class AssignmentProgram {
 public:
  int skill_count = 0;
  ObjectiveWeights weights;
  std::vector<ProgramTask> tasks;
  std::vector<ProgramColumn> columns;
  std::vector<ProgramVariable> variables;
  std::map<int, int> frozen;  // variable -> fixed value
  // (worker, task) pairs the event drops from the state before applying.
  std::vector<std::pair<WorkerId, TaskId>> removals;

  int variable_count() const { return static_cast<int>(variables.size()); }
  int free_variable_count() const {
    return variable_count() - static_cast<int>(frozen.size());
  }
  // -1 when the (column id, task id) pair has no variable.
  int FindVariable(int column_id, TaskId task) const;
  void Freeze(int variable, int value);
};

struct LinearTerm {
  std::string variable;
  double coefficient = 0.0;
};

struct LinearRow {
  enum class Kind { kQuality, kCost, kCardinality, kValueCap, kValueLink };
  Kind kind;
  std::string name;
  std::vector<LinearTerm> terms;
  double lower = -1e300;
  double upper = 1e300;
};

// Linearized rows with deterministic names: x variables w{worker}_t{task}
// (v{virtual}_t{task} for virtual columns), indicators y_t{task}, value
// carriers z_t{task}. Cardinality rows are ranges [min_total, max_total].
std::vector<LinearRow> LinearRows(const AssignmentProgram& program);
std::string VariableName(const AssignmentProgram& program, int variable);
void WriteLpFile(const AssignmentProgram& program, std::ostream& out);

enum class SolveStatus { kOptimal, kBudgetExhausted, kInfeasible };
const char* ToString(SolveStatus status);

struct SolveOptions {
  std::int64_t node_limit = 10'000'000;
  // Optional starting incumbent, one value per variable; ignored when it
  // violates a bound, a frozen value or a required task.
  std::vector<int> hint;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<int> assignment;  // one value per variable; empty if none found
  double objective = 0.0;       // sum of program task values
  std::int64_t nodes = 0;
  bool proven_optimal = false;
  double root_bound = 0.0;
  std::vector<char> task_satisfied;
  bool found = false;  // an assignment satisfying every hard row exists

  bool has_solution() const { return found; }
};

SolveResult Solve(const AssignmentProgram& program,
                  const SolveOptions& options = {});

// Objective of an arbitrary assignment; used by the solver at leaves and by
// tests. Throws std::invalid_argument when a column bound is violated.
double EvaluateAssignment(const AssignmentProgram& program,
                          std::span<const int> assignment,
                          std::vector<char>* task_satisfied = nullptr);

// n x |T| variables with per-worker range [X_l, X_h]. Throws
// InfeasibleProgram when X_l > |T|.
AssignmentProgram BuildDesignProgram(const Instance& instance);

// Decliners leave `task`; variables cover pool workers that are available,
// not already on the task, and below X_h. No decliners means no variables.
AssignmentProgram BuildReplacementProgram(const AssignmentState& state,
                                          const Instance& instance, TaskId task,
                                          std::span<const WorkerId> unavailable,
                                          std::span<const WorkerId> pool);

// A task below threshold with nobody leaving (for example one whose index
// is empty): the replacement program over `pool`, required to end satisfied.
AssignmentProgram BuildFillProgram(const AssignmentState& state,
                                   const Instance& instance, TaskId task,
                                   std::span<const WorkerId> pool);

// New workers (already appended to instance.workers) x all tasks; existing
// assignments are fixed. Per new worker range [0, X_h].
AssignmentProgram BuildAdditionProgram(const AssignmentState& state,
                                       const Instance& instance,
                                       std::span<const WorkerId> new_workers);

// Deleted workers leave every task; the tasks they held are re-optimized
// over the remaining available workers that are below X_h.
AssignmentProgram BuildDeletionProgram(const AssignmentState& state,
                                       const Instance& instance,
                                       std::span<const WorkerId> deleted);

// `instance` carries the new profiles. Updated workers leave every task and
// are re-assigned across all tasks within [X_l, X_h].
AssignmentProgram BuildUpdateProgram(const AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> updated);

// Applies removals and the solution's non-zero variables to `state`, then
// refreshes the touched indexes. Only valid for non-virtual programs.
void ApplySolution(const AssignmentProgram& program, const SolveResult& result,
                   const Instance& instance, AssignmentState& state);

// Fresh state from a design solution.
AssignmentState StateFromSolution(const AssignmentProgram& program,
                                  const SolveResult& result,
                                  const Instance& instance);

struct MaintenanceResult {
  SolveResult solve;
  double value_before = 0.0;
  double value_after = 0.0;
};

// Build, solve and apply in one step. For deletions the deleted workers are
// also marked unavailable. On kInfeasible or an empty budget-exhausted result
// only the removals are applied.
MaintenanceResult ReplaceWorkersExact(AssignmentState& state,
                                      const Instance& instance, TaskId task,
                                      std::span<const WorkerId> unavailable,
                                      std::span<const WorkerId> pool,
                                      const SolveOptions& options = {});
MaintenanceResult FillTaskExact(AssignmentState& state, const Instance& instance,
                                TaskId task, std::span<const WorkerId> pool,
                                const SolveOptions& options = {});
MaintenanceResult AddWorkersExact(AssignmentState& state,
                                  const Instance& instance,
                                  std::span<const WorkerId> new_workers,
                                  const SolveOptions& options = {});
MaintenanceResult DeleteWorkersExact(AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> deleted,
                                     const SolveOptions& options = {});
MaintenanceResult UpdateWorkersExact(AssignmentState& state,
                                     const Instance& instance,
                                     std::span<const WorkerId> updated,
                                     const SolveOptions& options = {});

}  // namespace smartcrowd

#endif  // SMARTCROWD_EXACT_H_
