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
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "smartcrowd/exact.h"
#include "smartcrowd/greedy.h"
#include "smartcrowd/objective.h"
#include "smartcrowd/sim.h"
#include "smartcrowd/virtual_workers.h"

namespace smartcrowd {

const char* ToString(Strategy strategy) {
  switch (strategy) {
    case Strategy::kBenchmark:
      return "Benchmark";
    case Strategy::kOnlineGreedy:
      return "OnlineGreedy";
    case Strategy::kOnlineOptimal:
      return "OnlineOptimal";
    case Strategy::kCDex:
      return "CDex";
    case Strategy::kOfflineOnlineCDexApprox:
      return "OfflineOnlineCDexApprox";
    case Strategy::kCDexPlus:
      return "CDexPlus";
  }
  return "unknown";
}

std::vector<Strategy> AllStrategies() {
  return {Strategy::kBenchmark, Strategy::kOnlineGreedy, Strategy::kOnlineOptimal,
          Strategy::kCDex,      Strategy::kOfflineOnlineCDexApprox,
          Strategy::kCDexPlus};
}

std::optional<Strategy> ParseStrategy(const std::string& name) {
  for (Strategy s : AllStrategies()) {
    if (name == ToString(s)) return s;
  }
  return std::nullopt;
}

namespace {

enum class EventKind { kRelease = 0, kWorkerArrival = 1, kTaskArrival = 2, kSample = 3 };

struct SimEvent {
  double time;
  EventKind kind;
  std::int64_t seq;
  int payload;  // task, index into worker_arrivals, or sample number

  bool operator>(const SimEvent& o) const {
    return std::tie(time, kind, seq) > std::tie(o.time, o.kind, o.seq);
  }
};

enum class TaskStatus { kNotArrived, kPending, kRunning, kDone };

class Simulation {
 public:
  Simulation(Strategy strategy, const Scenario& scenario, const SimConfig& config)
      : strategy_(strategy),
        scenario_(scenario),
        config_(config),
        instance_(scenario.instance),
        n_(instance_.worker_count()),
        task_count_(instance_.task_count()),
        live_(n_, task_count_),
        status_(task_count_, TaskStatus::kNotArrived),
        arrival_time_(task_count_, 0.0),
        duration_(task_count_, 0.0),
        offered_(static_cast<size_t>(n_) * task_count_, 0),
        declined_(task_count_),
        committed_(task_count_),
        online_until_(n_, -1.0) {}

  SimReport Run();

 private:
  bool Online(WorkerId u) const { return online_until_[u] > now_; }
  bool HasRoom(WorkerId u) const {
    return live_.load(u) < instance_.constraints.tasks_per_worker_max;
  }
  bool Offered(WorkerId u, TaskId t) const {
    return offered_[static_cast<size_t>(t) * n_ + u];
  }
  bool Eligible(WorkerId u, TaskId t) const {
    return status_[t] == TaskStatus::kPending && Online(u) && HasRoom(u) &&
           !Offered(u, t);
  }
  const TaskSpec& Spec(TaskId t) const { return instance_.workload.tasks[t]; }

  void Push(double time, EventKind kind, int payload) {
    queue_.push({time, kind, seq_++, payload});
  }
  void BuildIndex();
  // Records an offer; returns true when the worker accepts.
  bool Offer(WorkerId u, TaskId t, bool self_selected = false);
  void CheckSuccess(TaskId t);
  void Release(TaskId t);
  void OnTaskArrival(TaskId t, double duration);
  void OnWorkerArrival(const WorkerArrival& a);
  void OnPoolGrowth();
  void Serve(TaskId t);
  bool Replace(TaskId t, const std::vector<WorkerId>& leaving,
               const std::vector<WorkerId>& pool, std::vector<WorkerId>& proposals);
  void BenchmarkSelect(WorkerId u);
  void GreedySuggest(WorkerId u);
  void OptimizeOnline();
  void Audit();
  SimSample Sample(double time) const;
  std::vector<TaskId> PendingTasks() const;
  bool IsIndexStrategy() const {
    return strategy_ == Strategy::kCDex ||
           strategy_ == Strategy::kOfflineOnlineCDexApprox ||
           strategy_ == Strategy::kCDexPlus;
  }

  Strategy strategy_;
  const Scenario& scenario_;
  const SimConfig& config_;
  const Instance& instance_;
  int n_;
  int task_count_;

  AssignmentState live_;  // accepted pairs of pending and running tasks
  AssignmentState index_;
  ClusterSet clusters_;
  std::vector<TaskStatus> status_;
  std::vector<double> arrival_time_;
  std::vector<double> duration_;
  std::vector<char> offered_;
  std::vector<std::vector<WorkerId>> declined_;
  std::vector<std::vector<WorkerId>> committed_;
  std::vector<double> online_until_;

  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> queue_;
  std::int64_t seq_ = 0;
  double now_ = 0.0;

  int arrived_ = 0;
  int successful_ = 0;
  double value_sum_ = 0.0;
  double end_to_end_sum_ = 0.0;
  int timeouts_ = 0;
  std::int64_t offers_ = 0;
  std::int64_t audited_ = 0;
};

void Simulation::BuildIndex() {
  index_ = AssignmentState(n_, task_count_);
  SolveOptions options;
  options.node_limit = config_.design_node_limit;
  switch (strategy_) {
    case Strategy::kOfflineOnlineCDexApprox:
      index_ = OfflineGreedyDesign(instance_).state;
      break;
    case Strategy::kCDex: {
      const AssignmentProgram program = BuildDesignProgram(instance_);
      const GreedyResult warm = OfflineGreedyDesign(instance_);
      if (warm.trace.below_minimum.empty()) {
        options.hint.resize(program.variable_count());
        for (int v = 0; v < program.variable_count(); ++v) {
          const ProgramVariable& var = program.variables[v];
          options.hint[v] =
              warm.state.contains(var.task, program.columns[var.column].id) ? 1 : 0;
        }
      }
      const SolveResult result = Solve(program, options);
      if (result.status == SolveStatus::kBudgetExhausted) ++timeouts_;
      if (result.has_solution()) index_ = StateFromSolution(program, result, instance_);
      break;
    }
    case Strategy::kCDexPlus: {
      const double alpha =
          DistancePercentile(instance_.workers, config_.cluster_percentile);
      CDexPlusDesign design = DesignCDexPlus(instance_, alpha, options);
      if (design.solve.status == SolveStatus::kBudgetExhausted) ++timeouts_;
      index_ = std::move(design.state);
      clusters_ = std::move(design.clusters);
      break;
    }
    default:
      break;
  }
}

bool Simulation::Offer(WorkerId u, TaskId t, bool self_selected) {
  offered_[static_cast<size_t>(t) * n_ + u] = 1;
  ++offers_;
  const bool accepted =
      self_selected ||
      AcceptanceDraw(config_.seed, u, t) < instance_.workers[u].acceptance_ratio;
  if (!accepted) {
    declined_[t].push_back(u);
    return false;
  }
  live_.Assign(u, t);
  committed_[t].push_back(u);
  RefreshIndex(live_, instance_, t);
  return true;
}

void Simulation::CheckSuccess(TaskId t) {
  if (status_[t] != TaskStatus::kPending) return;
  const TaskValueBreakdown b =
      TaskValue(live_.workers_of(t), Spec(t), instance_.workers, instance_.weights);
  if (!b.feasible) return;
  status_[t] = TaskStatus::kRunning;
  ++successful_;
  value_sum_ += b.value;
  end_to_end_sum_ += now_ - arrival_time_[t];
  Push(now_ + duration_[t], EventKind::kRelease, t);
}

void Simulation::Release(TaskId t) {
  const std::vector<WorkerId> team = live_.workers_of(t);
  for (WorkerId u : team) live_.Unassign(u, t);
  RefreshIndex(live_, instance_, t);
  committed_[t].clear();
  status_[t] = TaskStatus::kDone;
}

std::vector<TaskId> Simulation::PendingTasks() const {
  std::vector<TaskId> pending;
  for (TaskId t = 0; t < task_count_; ++t) {
    if (status_[t] == TaskStatus::kPending) pending.push_back(t);
  }
  return pending;
}

bool Simulation::Replace(TaskId t, const std::vector<WorkerId>& leaving,
                         const std::vector<WorkerId>& pool,
                         std::vector<WorkerId>& proposals) {
  AssignmentState scratch = live_;
  SolveOptions options;
  options.node_limit = config_.solver_node_limit;
  const bool fill = leaving.empty();
  if (strategy_ == Strategy::kOfflineOnlineCDexApprox) {
    OnlineGreedyReplace(scratch, instance_, t, leaving, pool);
  } else {
    MaintenanceResult r;
    if (strategy_ == Strategy::kCDex) {
      r = fill ? FillTaskExact(scratch, instance_, t, pool, options)
               : ReplaceWorkersExact(scratch, instance_, t, leaving, pool, options);
    } else {
      r = fill ? FillTaskCDexPlus(scratch, clusters_, instance_, t, pool, options)
               : ReplaceWorkersCDexPlus(scratch, clusters_, instance_, t, leaving,
                                        pool, options);
    }
    if (r.solve.status == SolveStatus::kBudgetExhausted) {
      ++timeouts_;
      return false;
    }
  }
  for (WorkerId u : scratch.workers_of(t)) {
    if (!live_.contains(t, u)) proposals.push_back(u);
  }
  return true;
}

void Simulation::Serve(TaskId t) {
  for (WorkerId u : index_.workers_of(t)) {
    if (Eligible(u, t)) Offer(u, t);
  }
  CheckSuccess(t);
  while (status_[t] == TaskStatus::kPending) {
    std::vector<WorkerId> leaving = declined_[t];
    for (WorkerId u : index_.workers_of(t)) {
      if (!Offered(u, t)) leaving.push_back(u);
    }
    std::sort(leaving.begin(), leaving.end());
    std::vector<WorkerId> pool;
    for (WorkerId u = 0; u < n_; ++u) {
      if (Eligible(u, t) && !std::binary_search(leaving.begin(), leaving.end(), u)) {
        pool.push_back(u);
      }
    }
    if (pool.empty()) return;
    std::vector<WorkerId> proposals;
    if (!Replace(t, leaving, pool, proposals) || proposals.empty()) return;
    for (WorkerId u : proposals) {
      if (Eligible(u, t)) Offer(u, t);
    }
    CheckSuccess(t);
  }
}

void Simulation::BenchmarkSelect(WorkerId u) {
  const WorkerProfile& w = instance_.workers[u];
  while (HasRoom(u)) {
    TaskId best = -1;
    double best_residual = 0.0;
    for (TaskId t : PendingTasks()) {
      if (Offered(u, t)) continue;
      const TaskSpec& spec = Spec(t);
      const double residual = spec.max_cost - live_.index(t).expected_cost;
      if (residual + kTolerance < w.acceptance_ratio * w.wage) continue;
      bool qualified = true;
      for (int j = 0; j < instance_.skill_count(); ++j) {
        if (spec.quality_thresholds[j] > 0.0 &&
            w.skills[j] < 0.1 * spec.quality_thresholds[j]) {
          qualified = false;
        }
      }
      if (qualified && (best < 0 || residual > best_residual)) {
        best = t;
        best_residual = residual;
      }
    }
    if (best < 0) return;
    Offer(u, best, /*self_selected=*/true);
    CheckSuccess(best);
  }
}

void Simulation::GreedySuggest(WorkerId u) {
  const WorkerProfile& w = instance_.workers[u];
  double quality = 0.0;
  for (double s : w.skills) quality += w.acceptance_ratio * s;
  while (HasRoom(u)) {
    TaskId best = -1;
    std::pair<int, double> best_key{0, 0.0};
    for (TaskId t : PendingTasks()) {
      if (Offered(u, t)) continue;
      const TaskSpec& spec = Spec(t);
      const CDexIndex& current = live_.index(t);
      if (spec.max_cost <= 0.0 ||
          current.expected_cost + w.acceptance_ratio * w.wage >
              spec.max_cost + kTolerance) {
        continue;
      }
      std::pair<int, double> key;
      const double gain = MarginalGain(live_, instance_, u, t);
      if (gain > kTolerance) {
        key = {1, gain};
      } else {
        bool reduces = false;
        for (int j = 0; j < instance_.skill_count(); ++j) {
          reduces = reduces ||
                    (current.expected_quality[j] <
                         spec.quality_thresholds[j] - kTolerance &&
                     w.acceptance_ratio * w.skills[j] > 0.0);
        }
        if (!reduces) continue;
        key = {0, instance_.weights.w1 * quality -
                      instance_.weights.w2 * w.acceptance_ratio * w.wage / spec.max_cost};
      }
      if (best < 0 || key > best_key) {
        best = t;
        best_key = key;
      }
    }
    if (best < 0) return;
    if (Offer(u, best)) CheckSuccess(best);
  }
}

void Simulation::OptimizeOnline() {
  while (true) {
    const std::vector<TaskId> pending = PendingTasks();
    if (pending.empty()) return;
    AssignmentProgram program;
    program.skill_count = instance_.skill_count();
    program.weights = instance_.weights;
    for (TaskId t : pending) {
      program.tasks.push_back({Spec(t),
                               ExpectedAggregates(live_.workers_of(t),
                                                  instance_.workers,
                                                  instance_.skill_count()),
                               false});
    }
    for (WorkerId u = 0; u < n_; ++u) {
      if (!Online(u) || !HasRoom(u)) continue;
      const WorkerProfile& w = instance_.workers[u];
      ProgramColumn col;
      col.id = u;
      for (double s : w.skills) col.quality.push_back(w.acceptance_ratio * s);
      col.cost = w.acceptance_ratio * w.wage;
      col.max_total = instance_.constraints.tasks_per_worker_max - live_.load(u);
      const int c = static_cast<int>(program.columns.size());
      bool used = false;
      for (size_t k = 0; k < pending.size(); ++k) {
        if (Offered(u, pending[k])) continue;
        program.variables.push_back({c, static_cast<int>(k), 1});
        used = true;
      }
      if (used) program.columns.push_back(std::move(col));
    }
    if (program.variables.empty()) return;
    SolveOptions options;
    options.node_limit = config_.solver_node_limit;
    const SolveResult result = Solve(program, options);
    if (result.status == SolveStatus::kBudgetExhausted) {
      ++timeouts_;
      return;
    }
    if (!result.has_solution()) return;
    std::vector<TaskId> touched;
    for (int v = 0; v < program.variable_count(); ++v) {
      if (result.assignment[v] == 0) continue;
      const ProgramVariable& var = program.variables[v];
      const WorkerId u = program.columns[var.column].id;
      const TaskId t = pending[var.task];
      if (Eligible(u, t)) {
        Offer(u, t);
        touched.push_back(t);
      }
    }
    if (touched.empty()) return;
    for (TaskId t : touched) CheckSuccess(t);
  }
}

void Simulation::OnTaskArrival(TaskId t, double duration) {
  status_[t] = TaskStatus::kPending;
  arrival_time_[t] = now_;
  duration_[t] = duration;
  ++arrived_;
  if (IsIndexStrategy()) {
    Serve(t);
  } else if (strategy_ == Strategy::kOnlineOptimal) {
    OptimizeOnline();
  }
}

void Simulation::OnPoolGrowth() {
  if (IsIndexStrategy()) {
    for (TaskId t : PendingTasks()) Serve(t);
  } else if (strategy_ == Strategy::kOnlineOptimal) {
    OptimizeOnline();
  }
}

void Simulation::OnWorkerArrival(const WorkerArrival& a) {
  const bool newly_online = !Online(a.worker);
  online_until_[a.worker] = std::max(online_until_[a.worker], now_ + a.session);
  switch (strategy_) {
    case Strategy::kBenchmark:
      BenchmarkSelect(a.worker);
      break;
    case Strategy::kOnlineGreedy:
      GreedySuggest(a.worker);
      break;
    default:
      if (newly_online) OnPoolGrowth();
      break;
  }
}

void Simulation::Audit() {
  ++audited_;
  for (TaskId t = 0; t < task_count_; ++t) {
    for (WorkerId u : committed_[t]) {
      if (!live_.contains(t, u)) {
        throw std::logic_error("preemption: worker " + std::to_string(u) +
                               " left task " + std::to_string(t));
      }
    }
  }
  for (WorkerId u = 0; u < n_; ++u) {
    if (live_.load(u) > instance_.constraints.tasks_per_worker_max) {
      throw std::logic_error("worker " + std::to_string(u) + " exceeds X_h");
    }
  }
}

SimSample Simulation::Sample(double time) const {
  SimSample s;
  s.time = time;
  s.tasks_arrived = arrived_;
  s.tasks_successful = successful_;
  s.fraction_successful = arrived_ > 0 ? static_cast<double>(successful_) / arrived_ : 0.0;
  s.normalized_objective = arrived_ > 0 ? value_sum_ / arrived_ : 0.0;
  s.avg_end_to_end = successful_ > 0 ? end_to_end_sum_ / successful_ : 0.0;
  s.solver_timeouts = timeouts_;
  return s;
}

SimReport Simulation::Run() {
  SimReport report;
  report.strategy = strategy_;
  report.seed = config_.seed;
  if (config_.duration <= 0.0) return report;

  RefreshIndexes(live_, instance_);
  BuildIndex();
  for (const TaskArrival& a : scenario_.task_arrivals) {
    Push(a.time, EventKind::kTaskArrival, static_cast<int>(&a - scenario_.task_arrivals.data()));
  }
  for (size_t i = 0; i < scenario_.worker_arrivals.size(); ++i) {
    Push(scenario_.worker_arrivals[i].time, EventKind::kWorkerArrival, static_cast<int>(i));
  }
  const double interval = config_.duration / config_.sample_count;
  for (int k = 1; k <= config_.sample_count; ++k) {
    Push(k == config_.sample_count ? config_.duration : k * interval,
         EventKind::kSample, k);
  }

  while (!queue_.empty()) {
    const SimEvent e = queue_.top();
    queue_.pop();
    if (e.time > config_.duration) break;
    now_ = e.time;
    switch (e.kind) {
      case EventKind::kRelease:
        Release(e.payload);
        OnPoolGrowth();
        break;
      case EventKind::kWorkerArrival:
        OnWorkerArrival(scenario_.worker_arrivals[e.payload]);
        break;
      case EventKind::kTaskArrival: {
        const TaskArrival& a = scenario_.task_arrivals[e.payload];
        OnTaskArrival(a.task, a.duration);
        break;
      }
      case EventKind::kSample:
        report.samples.push_back(Sample(e.time));
        break;
    }
    if (config_.audit) Audit();
  }
  report.totals = report.samples.empty() ? Sample(config_.duration) : report.samples.back();
  report.offers = offers_;
  report.audited_events = audited_;
  return report;
}

}  // namespace

SimReport RunStrategy(Strategy strategy, const Scenario& scenario,
                      const SimConfig& config) {
  return Simulation(strategy, scenario, config).Run();
}

std::vector<SimReport> RunComparison(std::span<const Strategy> strategies,
                                     const SimConfig& config,
                                     std::span<const std::uint64_t> seeds,
                                     int threads) {
  std::vector<SimConfig> configs;
  std::vector<Scenario> scenarios;
  for (std::uint64_t seed : seeds) {
    SimConfig c = config;
    c.seed = seed;
    scenarios.push_back(GenerateScenario(c));
    configs.push_back(std::move(c));
  }
  const size_t cells = seeds.size() * strategies.size();
  std::vector<SimReport> reports(cells);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<size_t>(threads, std::max<size_t>(cells, 1)));

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < cells; i = next++) {
      const size_t s = i / strategies.size();
      try {
        reports[i] = RunStrategy(strategies[i % strategies.size()], scenarios[s], configs[s]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return reports;
}

void WriteReportCsv(std::span<const SimReport> reports, std::ostream& out) {
  out << "strategy,seed,time,tasks_arrived,tasks_successful,fraction_successful,"
         "normalized_objective,avg_end_to_end,solver_timeouts\n";
  char line[256];
  for (const SimReport& r : reports) {
    for (const SimSample& s : r.samples) {
      std::snprintf(line, sizeof(line), "%s,%llu,%.4f,%d,%d,%.6f,%.6f,%.6f,%d\n",
                    ToString(r.strategy), static_cast<unsigned long long>(r.seed),
                    s.time, s.tasks_arrived, s.tasks_successful,
                    s.fraction_successful, s.normalized_objective,
                    s.avg_end_to_end, s.solver_timeouts);
      out << line;
    }
  }
}

}  // namespace smartcrowd
