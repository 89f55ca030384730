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

// Discrete-event simulator comparing assignment strategies.
//
// A scenario fixes the worker population, the workload, the task arrival
// schedule and the worker arrival (session) schedule. Every strategy replays
// the same scenario; acceptance decisions come from a hash of
// (seed, worker, task) so that an offer of the same pair gets the same answer
// under every strategy.
//
// Config file (JSON, every field optional, unknown fields rejected):
//   duration, worker_count, skill_count, skills_per_task, workload_size,
//   worker_arrival_rate, task_arrival_rate, session_mean,
//   task_duration_mean, cluster_percentile, solver_node_limit,
//   design_node_limit, sample_count, seed, audit,
//   skill | wage | acceptance | task_size | threshold_factor | cost_factor:
//     {"mean": m, "variance": v},
//   weights: {"w1": a, "w2": b},
//   constraints: {"tasks_per_worker_min": l, "tasks_per_worker_max": h}

#ifndef SMARTCROWD_SIM_H_
#define SMARTCROWD_SIM_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "smartcrowd/model.h"

namespace smartcrowd {

struct NormalSpec {
  double mean = 0.0;
  double variance = 0.0;
  bool operator==(const NormalSpec&) const = default;
};

struct SimConfig {
  double duration = 14400.0;  // minutes
  int worker_count = 10000;
  int skill_count = 10;
  int skills_per_task = 1;
  NormalSpec skill{0.5, 0.15};
  NormalSpec wage{0.5, 0.2};
  NormalSpec acceptance{0.5, 0.1};
  // Threshold = size * threshold_factor; budget = size' * cost_factor with
  // an independent size draw.
  NormalSpec task_size{15.0, 3.0};
  NormalSpec threshold_factor{0.7, 0.15};
  NormalSpec cost_factor{0.5, 0.2};
  ObjectiveWeights weights;
  double worker_arrival_rate = 10.0;  // per minute
  double task_arrival_rate = 20.0;    // per minute
  int workload_size = 10000;
  double session_mean = 30.0;
  double task_duration_mean = 30.0;
  ConstraintConfig constraints{0, 2};
  double cluster_percentile = 20.0;
  std::int64_t solver_node_limit = 20'000;
  std::int64_t design_node_limit = 200'000;
  int sample_count = 10;
  std::uint64_t seed = 0;
  bool audit = true;  // check non-preemption and load after every event

  bool operator==(const SimConfig&) const = default;
};

// Every violated rule, empty when the config is usable.
std::vector<std::string> ValidateSimConfig(const SimConfig& config);

// Throws ParseError listing every problem at once.
SimConfig ReadSimConfig(std::istream& in);
void WriteSimConfig(const SimConfig& config, std::ostream& out);

// 60 minutes, 50 workers, 20 workload tasks. Task sizes are scaled so that
// a handful of workers can satisfy a task; tasks arrive once a minute, run
// for an hour on average, and each worker holds one task at a time.
SimConfig DeskScaleConfig();

struct TaskArrival {
  double time = 0.0;
  TaskId task = 0;
  double duration = 0.0;  // busy time once satisfied
};

struct WorkerArrival {
  double time = 0.0;
  WorkerId worker = 0;
  double session = 0.0;
};

struct Scenario {
  Instance instance;
  std::vector<TaskArrival> task_arrivals;      // time order
  std::vector<WorkerArrival> worker_arrivals;  // time order
};

Scenario GenerateScenario(const SimConfig& config);

// Instance alone, as written by the gen command.
Instance GenerateInstance(const SimConfig& config);

// Deterministic acceptance draw in [0,1) for an offer.
double AcceptanceDraw(std::uint64_t seed, WorkerId worker, TaskId task);

enum class Strategy {
  kBenchmark,
  kOnlineGreedy,
  kOnlineOptimal,
  kCDex,
  kOfflineOnlineCDexApprox,
  kCDexPlus,
};

const char* ToString(Strategy strategy);
std::optional<Strategy> ParseStrategy(const std::string& name);
std::vector<Strategy> AllStrategies();

struct SimSample {
  double time = 0.0;
  int tasks_arrived = 0;
  int tasks_successful = 0;
  double fraction_successful = 0.0;
  double normalized_objective = 0.0;
  double avg_end_to_end = 0.0;
  int solver_timeouts = 0;
  bool operator==(const SimSample&) const = default;
};

struct SimReport {
  Strategy strategy = Strategy::kBenchmark;
  std::uint64_t seed = 0;
  std::vector<SimSample> samples;
  SimSample totals;              // at the end of the horizon
  std::int64_t offers = 0;
  std::int64_t audited_events = 0;
};

SimReport RunStrategy(Strategy strategy, const Scenario& scenario,
                      const SimConfig& config);

// One report per (seed, strategy), seed-major. Cells run on up to `threads`
// threads; 0 picks the hardware concurrency.
std::vector<SimReport> RunComparison(std::span<const Strategy> strategies,
                                     const SimConfig& config,
                                     std::span<const std::uint64_t> seeds,
                                     int threads = 0);

void WriteReportCsv(std::span<const SimReport> reports, std::ostream& out);

}  // namespace smartcrowd

#endif  // SMARTCROWD_SIM_H_
