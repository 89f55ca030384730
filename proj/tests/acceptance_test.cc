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

// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance_test                 run every criterion
//   acceptance_test --criterion 3   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_commands.h"
#include "smartcrowd/exact.h"
#include "smartcrowd/greedy.h"
#include "smartcrowd/model.h"
#include "smartcrowd/objective.h"
#include "smartcrowd/sim.h"
#include "smartcrowd/virtual_workers.h"
#include "test_util.h"

namespace smartcrowd {
namespace {

constexpr double kEps = 1e-9;

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Format(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

// Every one of the 2^(n*|T|) membership matrices, filtered by X_l and X_h.
double EnumerateAllMatrices(const Instance& instance) {
  const int n = instance.worker_count();
  const int k = instance.task_count();
  double best = -1.0;
  std::vector<std::vector<WorkerId>> teams(k);
  for (unsigned long long mask = 0; mask < (1ull << (n * k)); ++mask) {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      const int load = std::popcount((mask >> (u * k)) & ((1ull << k) - 1));
      ok = load >= instance.constraints.tasks_per_worker_min &&
           load <= instance.constraints.tasks_per_worker_max;
    }
    if (!ok) continue;
    double total = 0.0;
    for (int t = 0; t < k; ++t) {
      teams[t].clear();
      for (int u = 0; u < n; ++u) {
        if (mask >> (u * k + t) & 1ull) teams[t].push_back(u);
      }
      total += TaskValue(teams[t], instance.workload.tasks[t], instance.workers,
                         instance.weights)
                   .value;
    }
    best = std::max(best, total);
  }
  return best;
}

Verdict GoldenExample() {
  const Instance instance = ExampleInstance();
  Stopwatch clock;
  const AssignmentProgram program = BuildDesignProgram(instance);
  const SolveResult result = Solve(program);
  const double seconds = clock.Seconds();
  if (result.status != SolveStatus::kOptimal) return {false, "solver not optimal"};
  const AssignmentState state = StateFromSolution(program, result, instance);
  const CDexIndex& first = state.index(0);
  const double v = GlobalValue(state, instance);
  const double oracle = EnumerateAllMatrices(instance);
  const bool team = state.workers_of(0) == std::vector<WorkerId>{0, 1, 5};
  const bool vector = std::abs(first.expected_quality[0] - 0.74) <= 0.005 &&
                      std::abs(first.expected_cost - 0.575) <= 0.005 &&
                      std::abs(first.value - 0.60) <= 0.01;
  const bool exact = std::abs(v - oracle) <= kEps;
  const bool printed = std::abs(v - 1.98) <= 0.05;
  return {team && vector && exact && printed && seconds < 5.0,
          Format("t1 team {u1,u2,u6}=%s, <%.4f, %.4f, %.4f>, V %.10f, "
                 "enumeration %.10f, |V-1.98| %.4f, %.3fs",
                 team ? "yes" : "no", first.value, first.expected_quality[0],
                 first.expected_cost, v, oracle, std::abs(v - 1.98), seconds)};
}

Verdict OracleEquivalence() {
  constexpr int kMaxWorkers[] = {0, 12, 8, 6, 5};
  int checked = 0, matched = 0;
  std::string first_miss;
  Stopwatch clock;
  for (unsigned seed = 0; checked < 500; ++seed) {
    testing::RandomInstanceOptions o;
    o.tasks = 1 + seed % 4;
    o.workers = 1 + (seed / 4) % kMaxWorkers[o.tasks];
    o.skills = 1 + seed % 2;
    o.x_low = seed % 5 == 0 ? 1 : 0;
    o.x_high = 1 + (seed / 7) % o.tasks;
    o.x_low = std::min(o.x_low, o.x_high);
    o.w1 = 0.1 * (seed % 11);
    o.threshold_scale = 1.2;
    const Instance instance = testing::RandomInstance(seed, o);
    const testing::BruteForceResult oracle = testing::BruteForceDesign(instance);
    const SolveResult result = Solve(BuildDesignProgram(instance));
    ++checked;
    const bool same = oracle.feasible()
                          ? result.status == SolveStatus::kOptimal &&
                                std::abs(result.objective - oracle.best) <= kEps
                          : result.status == SolveStatus::kInfeasible;
    if (same) {
      ++matched;
    } else if (first_miss.empty()) {
      first_miss = Format(", first mismatch seed %u", seed);
    }
  }
  return {matched == checked, Format("%d/%d instances (n*|T| <= 20) match "
                                     "enumeration, %.1fs%s",
                                     matched, checked, clock.Seconds(),
                                     first_miss.c_str())};
}

Verdict ApproximationGuarantee() {
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  int offline_runs = 0, online_runs = 0;
  std::vector<std::string> misses;
  double offline_worst = 1.0, online_worst = 1.0;
  for (unsigned seed = 0; seed < 500; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 1 + seed % 8;
    o.tasks = 1 + seed % 3;
    o.x_high = 1 + seed % 3;
    o.w1 = 1.0;
    o.threshold_scale = 0.0;
    const Instance instance = testing::RandomInstance(seed, o);
    const double greedy = GlobalValue(OfflineGreedyDesign(instance).state, instance);
    const SolveResult optimum = Solve(BuildDesignProgram(instance));
    ++offline_runs;
    if (optimum.objective <= 0.0) continue;
    const double ratio = greedy / optimum.objective;
    offline_worst = std::min(offline_worst, ratio);
    if (ratio < bound - kEps) misses.push_back(Format("offline %u: %.4f", seed, ratio));
  }
  for (unsigned seed = 0; seed < 500; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 2 + seed % 7;
    o.tasks = 1;
    o.x_high = 1;
    o.w1 = 1.0;
    o.threshold_scale = 0.0;
    const Instance instance = testing::RandomInstance(seed + 100000, o);
    AssignmentState state(instance.worker_count(), 1);
    state.Assign(0, 0);
    const std::vector<WorkerId> decliner = {0};
    std::vector<WorkerId> pool;
    for (WorkerId u = 1; u < instance.worker_count(); ++u) pool.push_back(u);
    AssignmentProgram program =
        BuildReplacementProgram(state, instance, 0, decliner, pool);
    program.tasks[0].must_be_satisfied = false;
    const SolveResult optimum = Solve(program);
    AssignmentState greedy = state;
    OnlineGreedyReplace(greedy, instance, 0, decliner, pool);
    ++online_runs;
    if (optimum.objective <= 0.0) continue;
    const double ratio = GlobalValue(greedy, instance) / optimum.objective;
    online_worst = std::min(online_worst, ratio);
    if (ratio < bound - kEps) misses.push_back(Format("online %u: %.4f", seed, ratio));
  }
  std::string detail = Format(
      "%d offline + %d online instances (Q=0, W2=0, X_l=0), bound %.4f, "
      "worst offline %.4f, worst online %.4f, %zu violations",
      offline_runs, online_runs, bound, offline_worst, online_worst, misses.size());
  for (const std::string& m : misses) detail += "; " + m;
  return {misses.empty(), detail};
}

Verdict SubmodularityRegimes() {
  int instances = 0, with_violation = 0;
  long long triples = 0, violations = 0, in_budget = 0;
  for (unsigned seed = 0; instances < 120; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 2 + seed % 5;
    o.tasks = 1;
    o.skills = 1 + seed % 2;
    o.threshold_scale = 0.0;
    o.w1 = 0.1 * (seed % 11);
    const testing::DiminishingReturnsReport r =
        testing::CheckDiminishingReturns(testing::RandomInstance(seed, o), 0);
    ++instances;
    triples += r.triples;
    violations += r.violations;
    in_budget += r.in_budget_violations;
    with_violation += r.violations > 0;
  }
  std::string witness = "none found";
  for (unsigned seed = 0; seed < 200; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 4;
    o.tasks = 1;
    const Instance instance = testing::RandomInstance(seed, o);
    const testing::DiminishingReturnsReport r =
        testing::CheckDiminishingReturns(instance, 0);
    if (r.in_budget_violations == 0) continue;
    witness = Format("seed %u, R mask %u, S mask %u, k %d", seed, r.witness_r,
                     r.witness_s, r.witness_k);
    break;
  }
  const bool found = witness != "none found";
  return {violations == 0 && found,
          Format("Q=0: %d instances, %lld triples, %lld violations on %d "
                 "instances (%lld with S+k within budget, the rest cross the "
                 "budget cliff); Q>0 counterexample: %s",
                 instances, triples, violations, with_violation, in_budget,
                 witness.c_str())};
}

Verdict VirtualWorkerExample() {
  const Instance instance = ExampleInstance();
  const ClusterSet clusters = BuildClusterSet(instance, 0.25);
  bool ok = clusters.size() == 2;
  std::string detail = Format("%d clusters", clusters.size());
  if (ok) {
    const VirtualWorker& v1 = clusters.virtuals[0];
    const VirtualWorker& v2 = clusters.virtuals[1];
    ok = v1.members == std::vector<WorkerId>{0, 1, 2, 4} &&
         v2.members == std::vector<WorkerId>{3, 5} &&
         std::abs(v2.skills[0] - 0.3) <= kEps && std::abs(v2.wage - 0.36) <= kEps &&
         v2.size() == 2 && std::abs(v1.wage - 0.24) <= kEps;
    detail += Format(" {u1,u2,u3,u5}/{u4,u6}, V1 <%.2f, %.2f, %d>, V2 <%.2f, %.2f, %d>",
                     v1.skills[0], v1.wage, v1.size(), v2.skills[0], v2.wage,
                     v2.size());
  }
  const int plus_vars = DesignCDexPlus(instance, 0.25).program.variable_count();
  const int full_vars = BuildDesignProgram(instance).variable_count();
  ok = ok && plus_vars == 6 && full_vars == 18;
  detail += Format(", variables %d vs %d", plus_vars, full_vars);
  return {ok, detail};
}

Verdict Dominance() {
  int instances = 0, dominated = 0, cost_safe = 0;
  for (unsigned seed = 0; seed < 300; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 3 + seed % 6;
    o.tasks = 1 + seed % 3;
    o.skills = 1 + seed % 2;
    o.x_high = 1 + seed % 2;
    o.w1 = 0.1 * (seed % 11);
    const Instance instance = testing::RandomInstance(seed, o);
    const SolveResult exact = Solve(BuildDesignProgram(instance));
    const double alpha =
        DistancePercentile(instance.workers, 10.0 + 10.0 * (seed % 7));
    const CDexPlusDesign plus = DesignCDexPlus(instance, alpha);
    ++instances;
    dominated += plus.solve.has_solution() &&
                 plus.virtual_value <= exact.objective + kEps &&
                 plus.actual_value <= exact.objective + kEps;
    bool safe = true;
    for (int t = 0; t < instance.task_count(); ++t) {
      if (!plus.solve.task_satisfied[t]) continue;
      const Aggregates agg = ExpectedAggregates(
          plus.state.workers_of(t), instance.workers, instance.workload.skill_count);
      safe = safe && agg.cost <= instance.workload.tasks[t].max_cost + kEps;
    }
    for (WorkerId u = 0; u < instance.worker_count(); ++u) {
      safe = safe && plus.state.load(u) <= o.x_high;
    }
    cost_safe += safe;
  }
  return {dominated == instances && cost_safe == instances,
          Format("%d instances: C-DEX+ <= C-DEX on %d, disintegrated teams within "
                 "true budgets on %d",
                 instances, dominated, cost_safe)};
}

double MeanFinal(const std::vector<SimReport>& reports, Strategy s,
                 double SimSample::*field) {
  double sum = 0.0;
  int count = 0;
  for (const SimReport& r : reports) {
    if (r.strategy != s) continue;
    sum += r.totals.*field;
    ++count;
  }
  return count ? sum / count : 0.0;
}

Verdict SimulatorOrdering() {
  const SimConfig config = DeskScaleConfig();
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
  const std::vector<Strategy> strategies = AllStrategies();
  Stopwatch clock;
  const std::vector<SimReport> reports = RunComparison(strategies, config, seeds);
  const double seconds = clock.Seconds();
  auto frac = [&](Strategy s) {
    return MeanFinal(reports, s, &SimSample::fraction_successful);
  };
  auto obj = [&](Strategy s) {
    return MeanFinal(reports, s, &SimSample::normalized_objective);
  };
  const bool order = frac(Strategy::kCDex) >= frac(Strategy::kOnlineGreedy) &&
                     frac(Strategy::kOnlineGreedy) >= frac(Strategy::kBenchmark);
  const bool objective =
      obj(Strategy::kCDex) > obj(Strategy::kBenchmark) &&
      obj(Strategy::kOfflineOnlineCDexApprox) > obj(Strategy::kBenchmark) &&
      obj(Strategy::kCDexPlus) > obj(Strategy::kBenchmark);
  std::string detail = Format("20 seeds, %.1fs; success", seconds);
  for (Strategy s : strategies) detail += Format(" %s %.3f", ToString(s), frac(s));
  detail += "; objective";
  for (Strategy s : strategies) detail += Format(" %s %.3f", ToString(s), obj(s));
  return {order && objective && seconds < 60.0, detail};
}

struct MaintenanceTally {
  int checked = 0;
  int matched = 0;
  int preserved = 0;
};

void Record(MaintenanceTally& tally, const MaintenanceResult& r,
            const AssignmentProgram& full, const AssignmentState& before,
            const AssignmentState& after,
            std::span<const std::pair<WorkerId, TaskId>> released) {
  ++tally.checked;
  const testing::BruteForceResult oracle = testing::BruteForceProgram(full);
  tally.matched += r.solve.has_solution()
                       ? std::abs(r.value_after - oracle.best) <= kEps
                       : !oracle.feasible() || r.solve.status == SolveStatus::kInfeasible;
  tally.preserved += CheckNonPreemption(before, after, released).empty();
}

Verdict MaintenanceCorrectness() {
  constexpr int kMaxFree = 12;
  MaintenanceTally decline, add, remove, update;
  for (unsigned seed = 0; seed < 400; ++seed) {
    testing::RandomInstanceOptions o;
    o.workers = 3 + seed % 4;
    o.tasks = 2 + seed % 2;
    o.skills = 1 + seed % 2;
    o.x_high = 2;
    o.w1 = 0.1 * (seed % 11);
    o.threshold_scale = 0.8;
    Instance instance = testing::RandomInstance(seed, o);
    const AssignmentProgram design = BuildDesignProgram(instance);
    const SolveResult solved = Solve(design);
    if (!solved.has_solution()) continue;
    const AssignmentState base = StateFromSolution(design, solved, instance);
    std::vector<WorkerId> everyone;
    for (WorkerId u = 0; u < instance.worker_count(); ++u) everyone.push_back(u);

    switch (seed % 4) {
      case 0: {
        const TaskId t = static_cast<TaskId>(seed / 4 % instance.task_count());
        if (base.workers_of(t).empty()) break;
        const std::vector<WorkerId> leaving = {base.workers_of(t).front()};
        AssignmentState state = base;
        const AssignmentProgram m =
            BuildReplacementProgram(state, instance, t, leaving, everyone);
        if (m.variable_count() > kMaxFree) break;
        const AssignmentState residual = testing::WithoutRemovals(state, m);
        const MaintenanceResult r =
            ReplaceWorkersExact(state, instance, t, leaving, everyone);
        Record(decline, r,
               testing::FrozenFullProgram(instance, residual, testing::FreePairs(m)),
               base, state, m.removals);
        break;
      }
      case 1: {
        instance.workers.push_back(
            {instance.worker_count(), instance.workers[0].skills, 0.2, 0.9});
        const std::vector<WorkerId> added = {instance.worker_count() - 1};
        AssignmentState state = base;
        state.EnsureWorkers(instance.worker_count());
        const AssignmentState before = state;
        const AssignmentProgram m = BuildAdditionProgram(state, instance, added);
        if (m.variable_count() > kMaxFree) break;
        const MaintenanceResult r = AddWorkersExact(state, instance, added);
        Record(add, r,
               testing::FrozenFullProgram(instance, before, testing::FreePairs(m)),
               before, state, {});
        break;
      }
      case 2: {
        const std::vector<WorkerId> deleted = {static_cast<WorkerId>(seed / 4 % o.workers)};
        AssignmentState state = base;
        const AssignmentProgram m = BuildDeletionProgram(state, instance, deleted);
        if (m.variable_count() > kMaxFree) break;
        AssignmentState residual = testing::WithoutRemovals(state, m);
        residual.set_available(deleted[0], false);
        const MaintenanceResult r = DeleteWorkersExact(state, instance, deleted);
        Record(remove, r,
               testing::FrozenFullProgram(instance, residual, testing::FreePairs(m)),
               base, state, m.removals);
        break;
      }
      case 3: {
        const WorkerId u = static_cast<WorkerId>(seed / 4 % o.workers);
        for (double& s : instance.workers[u].skills) s = 1.0 - s;
        instance.workers[u].wage = 1.0 - instance.workers[u].wage;
        const std::vector<WorkerId> updated = {u};
        AssignmentState state = base;
        RefreshIndexes(state, instance);
        const AssignmentProgram m = BuildUpdateProgram(state, instance, updated);
        if (m.variable_count() > kMaxFree) break;
        const AssignmentState residual = testing::WithoutRemovals(state, m);
        const MaintenanceResult r = UpdateWorkersExact(state, instance, updated);
        Record(update, r,
               testing::FrozenFullProgram(instance, residual, testing::FreePairs(m),
                                          {u}),
               base, state, m.removals);
        break;
      }
    }
  }

  SimConfig config = DeskScaleConfig();
  config.audit = true;
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  long long audited = 0;
  std::string audit_error;
  try {
    for (const SimReport& r : RunComparison(AllStrategies(), config, seeds)) {
      audited += r.audited_events;
    }
  } catch (const std::exception& e) {
    audit_error = e.what();
  }

  bool ok = audit_error.empty() && audited > 0;
  std::string detail;
  for (const auto& [name, t] : {std::pair<const char*, const MaintenanceTally*>{
                                    "decline", &decline},
                                {"add", &add},
                                {"delete", &remove},
                                {"update", &update}}) {
    ok = ok && t->checked >= 25 && t->matched == t->checked &&
         t->preserved == t->checked;
    detail += Format("%s %d/%d exact, %d non-preempting; ", name, t->matched,
                     t->checked, t->preserved);
  }
  detail += audit_error.empty()
                ? Format("simulator audit held on %lld events", audited)
                : "simulator audit failed: " + audit_error;
  return {ok, detail};
}

std::string CsvFor(const std::vector<std::uint64_t>& seeds, int threads) {
  std::ostringstream out;
  WriteReportCsv(RunComparison(AllStrategies(), DeskScaleConfig(), seeds, threads),
                 out);
  return out.str();
}

std::string CliCsv(const std::filesystem::path& path) {
  const std::string csv = path.string();
  const char* argv[] = {"smartcrowd", "simulate", "--desk",  "--seeds",
                        "5-7",        "--csv",    csv.c_str()};
  std::ostringstream out, err;
  if (cli::Run(7, argv, out, err) != cli::kOk) return "error: " + err.str();
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict Determinism() {
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  const std::string a = CsvFor(seeds, 1);
  const std::string b = CsvFor(seeds, 0);
  const std::string c = CsvFor(seeds, 1);
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string d = CliCsv(dir / "smartcrowd_acceptance_a.csv");
  const std::string e = CliCsv(dir / "smartcrowd_acceptance_b.csv");
  std::filesystem::remove(dir / "smartcrowd_acceptance_a.csv");
  std::filesystem::remove(dir / "smartcrowd_acceptance_b.csv");
  const bool ok = a == b && a == c && d == e && d.rfind("strategy,", 0) == 0;
  return {ok, Format("library CSV %zu bytes identical across 3 runs: %s; CLI CSV "
                     "%zu bytes identical across 2 runs: %s",
                     a.size(), a == b && a == c ? "yes" : "no", d.size(),
                     d == e ? "yes" : "no")};
}

}  // namespace
}  // namespace smartcrowd

int main(int argc, char** argv) {
  CLI::App app("SmartCrowd acceptance suite");
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  using smartcrowd::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"golden example", smartcrowd::GoldenExample},
      {"oracle equivalence", smartcrowd::OracleEquivalence},
      {"approximation guarantee", smartcrowd::ApproximationGuarantee},
      {"submodularity regimes", smartcrowd::SubmodularityRegimes},
      {"virtual-worker example", smartcrowd::VirtualWorkerExample},
      {"dominance", smartcrowd::Dominance},
      {"simulator ordering", smartcrowd::SimulatorOrdering},
      {"maintenance correctness", smartcrowd::MaintenanceCorrectness},
      {"determinism", smartcrowd::Determinism},
  };
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i) + 1) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first,
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
