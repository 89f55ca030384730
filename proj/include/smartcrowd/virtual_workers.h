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

// Virtual workers: clusters of workers with similar profiles, each summarized
// by the minimum p-scaled skill and the maximum p-scaled wage of its members.
// Indexes designed over virtual workers (C-DEX+) need |N| x |T| integer
// variables instead of n x |T| booleans; assignments are mapped back to
// actual members round-robin.

#ifndef SMARTCROWD_VIRTUAL_WORKERS_H_
#define SMARTCROWD_VIRTUAL_WORKERS_H_

#include <ostream>
#include <span>
#include <vector>

#include "smartcrowd/exact.h"
#include "smartcrowd/model.h"

namespace smartcrowd {

// Euclidean distance between expected profiles (p * skills, p * wage).
double ProfileDistance(const WorkerProfile& a, const WorkerProfile& b);

// Nearest-rank percentile (in [0, 100]) of pairwise profile distances.
// Above kMaxPercentilePairs pairs a fixed stride sample is used.
inline constexpr long long kMaxPercentilePairs = 4'000'000;
double DistancePercentile(std::span<const WorkerProfile> workers,
                          double percentile);

// Workers are taken in the given order; each joins the first cluster whose
// members are all within alpha, else opens a new cluster.
std::vector<std::vector<WorkerId>> ClusterWorkers(
    std::span<const WorkerProfile> workers, std::span<const WorkerId> ids,
    double alpha);

VirtualWorker MakeVirtualWorker(int id, std::vector<WorkerId> members,
                                std::span<const WorkerProfile> workers,
                                const ConstraintConfig& constraints);

// The live cluster partition plus one round-robin cursor per cluster.
struct ClusterSet {
  double alpha = 0.0;
  std::vector<VirtualWorker> virtuals;
  std::vector<int> cursors;  // parallel to virtuals
  int next_id = 0;

  // Position in `virtuals` of the cluster holding `worker`, or -1.
  int Find(WorkerId worker) const;
  int size() const { return static_cast<int>(virtuals.size()); }
};

ClusterSet BuildClusterSet(const Instance& instance, double alpha);

// New workers form new clusters among themselves; old clusters are kept.
void ClusterAddWorkers(ClusterSet& clusters, const Instance& instance,
                       std::span<const WorkerId> new_workers);

// Every cluster holding an affected worker is dissolved and its members,
// minus `removed`, are re-clustered among themselves. `instance` carries
// the current (possibly updated) profiles.
void ClusterRemoveOrUpdate(ClusterSet& clusters, const Instance& instance,
                           std::span<const WorkerId> removed,
                           std::span<const WorkerId> updated);

// One integer variable per (virtual worker, task) in [0, n'], per virtual
// worker total in [n' X_l, n' X_h].
AssignmentProgram BuildCDexPlusProgram(const Instance& instance,
                                       const ClusterSet& clusters);

// Units of each virtual column demanded by each program task.
struct VirtualDemand {
  int column = 0;  // index into ClusterSet::virtuals
  TaskId task = 0;
  int units = 0;
};

// Maps virtual units onto distinct eligible members (available, below X_h,
// not yet on the task, and allowed when `allowed` is non-empty), walking each
// cluster's cursor. Falls back to a max-flow placement when the walk gets
// stuck; throws std::runtime_error if no placement exists. Returns the
// (worker, task) pairs added.
std::vector<std::pair<WorkerId, TaskId>> Disintegrate(
    std::span<const VirtualDemand> demand, ClusterSet& clusters,
    const Instance& instance, AssignmentState& state,
    std::span<const char> allowed = {});

struct CDexPlusDesign {
  ClusterSet clusters;
  AssignmentProgram program;
  SolveResult solve;
  AssignmentState state;       // actual workers
  double virtual_value = 0.0;  // objective under virtual profiles
  double actual_value = 0.0;   // global value of the disintegrated state
};

CDexPlusDesign DesignCDexPlus(const Instance& instance, double alpha,
                              const SolveOptions& options = {});

// Maintenance at virtual granularity. Each call mirrors the exact module's
// marginal program with virtual columns restricted to eligible members,
// then disintegrates the solution.
MaintenanceResult ReplaceWorkersCDexPlus(AssignmentState& state,
                                         ClusterSet& clusters,
                                         const Instance& instance, TaskId task,
                                         std::span<const WorkerId> unavailable,
                                         std::span<const WorkerId> pool,
                                         const SolveOptions& options = {});
MaintenanceResult FillTaskCDexPlus(AssignmentState& state, ClusterSet& clusters,
                                   const Instance& instance, TaskId task,
                                   std::span<const WorkerId> pool,
                                   const SolveOptions& options = {});
MaintenanceResult AddWorkersCDexPlus(AssignmentState& state, ClusterSet& clusters,
                                     const Instance& instance,
                                     std::span<const WorkerId> new_workers,
                                     const SolveOptions& options = {});
MaintenanceResult DeleteWorkersCDexPlus(AssignmentState& state,
                                        ClusterSet& clusters,
                                        const Instance& instance,
                                        std::span<const WorkerId> deleted,
                                        const SolveOptions& options = {});
MaintenanceResult UpdateWorkersCDexPlus(AssignmentState& state,
                                        ClusterSet& clusters,
                                        const Instance& instance,
                                        std::span<const WorkerId> updated,
                                        const SolveOptions& options = {});

// Columns: virtual_id,members,skills,wage,capacity_min,capacity_max with
// members and skills separated by ';'.
void WriteClusterCsv(const ClusterSet& clusters, std::ostream& out);

}  // namespace smartcrowd

#endif  // SMARTCROWD_VIRTUAL_WORKERS_H_
