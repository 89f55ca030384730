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

#include "cli_commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smartcrowd/exact.h"
#include "smartcrowd/greedy.h"
#include "smartcrowd/io.h"
#include "smartcrowd/model.h"
#include "smartcrowd/objective.h"
#include "smartcrowd/sim.h"
#include "smartcrowd/virtual_workers.h"

namespace smartcrowd::cli {
namespace {

// Failure carrying its exit code.
struct CommandError {
  int code;
  std::string message;
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError{kUsage, "cannot open " + path};
  return in;
}

std::string Format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

// Writes every file to a temporary sibling first and renames only when all
// writes succeeded.
void WriteFiles(
    const std::vector<std::pair<std::string, std::function<void(std::ostream&)>>>& files) {
  std::vector<std::string> temps;
  auto cleanup = [&temps] {
    for (const std::string& t : temps) std::filesystem::remove(t);
  };
  for (const auto& [path, write] : files) {
    const std::string tmp = path + ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) write(out);
    out.flush();
    if (!out) {
      cleanup();
      throw CommandError{kUsage, "cannot write " + path};
    }
  }
  for (size_t i = 0; i < files.size(); ++i) {
    std::filesystem::rename(temps[i], files[i].first);
  }
}

struct Overrides {
  std::optional<double> w1;
  std::optional<int> xl;
  std::optional<int> xh;

  void Register(CLI::App* cmd) {
    cmd->add_option("--w1", w1, "skill weight W1 (W2 = 1 - W1)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--xl", xl, "minimum tasks per worker")->check(CLI::NonNegativeNumber);
    cmd->add_option("--xh", xh, "maximum tasks per worker")->check(CLI::PositiveNumber);
  }
  void Apply(Instance& instance) const {
    if (w1) instance.weights = ObjectiveWeights::FromSkillWeight(*w1);
    if (xl) instance.constraints.tasks_per_worker_min = *xl;
    if (xh) instance.constraints.tasks_per_worker_max = *xh;
    const ValidationReport report = ValidateInstance(instance);
    if (!report.ok()) {
      std::string message = "invalid instance after overrides:";
      for (const std::string& v : report.violations) message += "\n  " + v;
      throw CommandError{kUsage, message};
    }
  }
};

Instance LoadInstance(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ReadInstance(in);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool example = false;
  bool desk = false;
};

int Gen(const GenArgs& a, std::ostream& out) {
  Instance instance;
  if (a.example) {
    instance = ExampleInstance();
  } else {
    SimConfig config = a.desk ? DeskScaleConfig() : SimConfig();
    if (!a.config.empty()) {
      std::ifstream in = OpenInput(a.config);
      config = ReadSimConfig(in);
    }
    if (a.seed) config.seed = *a.seed;
    instance = GenerateInstance(config);
  }
  WriteFiles({{a.out, [&](std::ostream& o) { WriteInstance(instance, o); }}});
  out << "wrote " << a.out << ": " << instance.worker_count() << " workers, "
      << instance.task_count() << " tasks, " << instance.skill_count() << " skills\n";
  return kOk;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  std::string instance;
  std::string method = "exact";
  std::optional<double> alpha;
  double percentile = 20.0;
  std::string out;
  std::string lp_out;
  std::int64_t budget = 10'000'000;
  Overrides overrides;
};

void PrintIndexes(const AssignmentState& state, const Instance& instance,
                  std::ostream& out) {
  for (const CDexIndex& e : state.indexes()) {
    out << "task " << e.task_id << ": value " << Format("%.6f", e.value)
        << " quality [";
    for (size_t j = 0; j < e.expected_quality.size(); ++j) {
      out << (j ? ", " : "") << Format("%.6f", e.expected_quality[j]);
    }
    out << "] cost " << Format("%.6f", e.expected_cost) << " workers [";
    for (size_t i = 0; i < e.assigned_workers.size(); ++i) {
      out << (i ? ", " : "") << e.assigned_workers[i];
    }
    out << "]\n";
  }
  out << "V " << Format("%.9f", GlobalValue(state, instance)) << '\n';
}

int Build(const BuildArgs& a, std::ostream& out) {
  Instance instance = LoadInstance(a.instance);
  a.overrides.Apply(instance);
  SolveOptions options;
  options.node_limit = a.budget;
  IndexFile index;
  index.method = a.method;
  std::optional<AssignmentProgram> lp;

  if (a.method == "greedy") {
    GreedyResult result = OfflineGreedyDesign(instance);
    index.state = std::move(result.state);
    out << "pair evaluations " << result.trace.pair_evaluations << '\n';
    if (!result.trace.below_minimum.empty()) {
      out << "warning: " << result.trace.below_minimum.size()
          << " workers below tasks_per_worker_min\n";
    }
  } else if (a.method == "exact") {
    AssignmentProgram program;
    try {
      program = BuildDesignProgram(instance);
    } catch (const InfeasibleProgram& e) {
      throw CommandError{kInfeasible, e.what()};
    }
    const SolveResult result = Solve(program, options);
    out << "status " << ToString(result.status) << ", nodes " << result.nodes << '\n';
    if (result.status == SolveStatus::kInfeasible) {
      throw CommandError{kInfeasible, "design program is infeasible"};
    }
    if (result.status == SolveStatus::kBudgetExhausted) {
      throw CommandError{kBudgetExhausted,
                         "node budget exhausted; raise --budget"};
    }
    index.state = StateFromSolution(program, result, instance);
    lp = std::move(program);
  } else if (a.method == "cdex-plus") {
    const double alpha =
        a.alpha ? *a.alpha : DistancePercentile(instance.workers, a.percentile);
    CDexPlusDesign design = DesignCDexPlus(instance, alpha, options);
    out << "alpha " << Format("%.6f", alpha) << ", virtual workers "
        << design.clusters.size() << ", variables "
        << design.program.variable_count() << '\n';
    out << "status " << ToString(design.solve.status) << ", nodes "
        << design.solve.nodes << ", virtual objective "
        << Format("%.9f", design.virtual_value) << '\n';
    if (design.solve.status == SolveStatus::kInfeasible) {
      throw CommandError{kInfeasible, "virtual design program is infeasible"};
    }
    if (design.solve.status == SolveStatus::kBudgetExhausted) {
      throw CommandError{kBudgetExhausted,
                         "node budget exhausted; raise --budget"};
    }
    index.state = std::move(design.state);
    index.clusters = std::move(design.clusters);
    lp = std::move(design.program);
  } else {
    throw CommandError{kUsage, "unknown method " + a.method};
  }

  PrintIndexes(index.state, instance, out);
  std::vector<std::pair<std::string, std::function<void(std::ostream&)>>> files;
  files.push_back({a.out, [&](std::ostream& o) { WriteIndex(index, instance, o); }});
  if (!a.lp_out.empty()) {
    if (!lp) throw CommandError{kUsage, "--lp-out needs --method exact or cdex-plus"};
    files.push_back({a.lp_out, [&](std::ostream& o) { WriteLpFile(*lp, o); }});
  }
  WriteFiles(files);
  return kOk;
}

// ---------------------------------------------------------------- maintain

struct MaintainArgs {
  std::string instance;
  std::string index;
  std::string events;
  std::string method;
  std::string out;
  std::string instance_out;
  std::int64_t budget = 10'000'000;
};

int Maintain(const MaintainArgs& a, std::ostream& out) {
  Instance instance = LoadInstance(a.instance);
  IndexFile index = [&] {
    std::ifstream in = OpenInput(a.index);
    return ReadIndex(in, instance);
  }();
  const std::vector<Event> events = [&] {
    std::ifstream in = OpenInput(a.events);
    return ReadEvents(in);
  }();
  ValidateEvents(events, instance, index.state);

  const std::string method = a.method.empty() ? index.method : a.method;
  if (method != "exact" && method != "greedy" && method != "cdex-plus") {
    throw CommandError{kUsage, "unknown method " + method};
  }
  if (method == "cdex-plus" && !index.clusters) {
    throw CommandError{kUsage, "cdex-plus maintenance needs an index with clusters"};
  }
  bool grows_instance = false;
  for (const Event& e : events) {
    grows_instance = grows_instance || e.type == Event::Type::kAdd ||
                     e.type == Event::Type::kUpdate;
  }
  if (grows_instance && a.instance_out.empty()) {
    throw CommandError{kUsage, "add and update events need --instance-out"};
  }

  SolveOptions options;
  options.node_limit = a.budget;
  AssignmentState& state = index.state;
  for (size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const double before = GlobalValue(state, instance);
    std::optional<MaintenanceResult> solved;
    std::vector<WorkerId> ids = e.workers;
    if (e.type == Event::Type::kAdd) {
      ids.clear();
      for (WorkerProfile w : e.profiles) {
        w.id = instance.worker_count();
        ids.push_back(w.id);
        instance.workers.push_back(std::move(w));
      }
      state.EnsureWorkers(instance.worker_count());
    } else if (e.type == Event::Type::kUpdate) {
      ids.clear();
      for (const WorkerProfile& w : e.profiles) {
        instance.workers[w.id] = w;
        ids.push_back(w.id);
      }
      RefreshIndexes(state, instance);
    }
    std::vector<WorkerId> pool;
    if (e.type == Event::Type::kDecline) {
      if (e.pool) {
        pool = *e.pool;
      } else {
        for (WorkerId u = 0; u < instance.worker_count(); ++u) {
          if (state.available(u)) pool.push_back(u);
        }
      }
    }

    if (method == "greedy") {
      switch (e.type) {
        case Event::Type::kDecline:
          OnlineGreedyReplace(state, instance, e.task, ids, pool);
          break;
        case Event::Type::kAdd:
          GreedyAddWorkers(state, instance, ids);
          break;
        case Event::Type::kDelete:
          GreedyDeleteWorkers(state, instance, ids);
          break;
        case Event::Type::kUpdate:
          GreedyUpdateWorkers(state, instance, ids);
          break;
      }
    } else if (method == "exact") {
      switch (e.type) {
        case Event::Type::kDecline:
          solved = ReplaceWorkersExact(state, instance, e.task, ids, pool, options);
          break;
        case Event::Type::kAdd:
          solved = AddWorkersExact(state, instance, ids, options);
          break;
        case Event::Type::kDelete:
          solved = DeleteWorkersExact(state, instance, ids, options);
          break;
        case Event::Type::kUpdate:
          solved = UpdateWorkersExact(state, instance, ids, options);
          break;
      }
    } else {
      ClusterSet& clusters = *index.clusters;
      switch (e.type) {
        case Event::Type::kDecline:
          solved = ReplaceWorkersCDexPlus(state, clusters, instance, e.task, ids,
                                          pool, options);
          break;
        case Event::Type::kAdd:
          solved = AddWorkersCDexPlus(state, clusters, instance, ids, options);
          break;
        case Event::Type::kDelete:
          solved = DeleteWorkersCDexPlus(state, clusters, instance, ids, options);
          break;
        case Event::Type::kUpdate:
          solved = UpdateWorkersCDexPlus(state, clusters, instance, ids, options);
          break;
      }
    }
    if (solved && solved->solve.status == SolveStatus::kBudgetExhausted) {
      throw CommandError{kBudgetExhausted, "event " + std::to_string(i) +
                                               ": node budget exhausted; raise --budget"};
    }
    const double after = GlobalValue(state, instance);
    out << "event " << i << ' ' << ToString(e.type) << ": dV "
        << Format("%+.9f", after - before) << ", V " << Format("%.9f", after);
    if (e.type == Event::Type::kDecline &&
        !TaskValue(state.workers_of(e.task), instance.workload.tasks[e.task],
                   instance.workers, instance.weights)
             .feasible) {
      out << " (task " << e.task << " left unsatisfied)";
    }
    out << '\n';
  }
  index.method = method;

  std::vector<std::pair<std::string, std::function<void(std::ostream&)>>> files;
  files.push_back({a.out, [&](std::ostream& o) { WriteIndex(index, instance, o); }});
  if (!a.instance_out.empty()) {
    files.push_back({a.instance_out, [&](std::ostream& o) { WriteInstance(instance, o); }});
  }
  WriteFiles(files);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  bool desk = false;
  std::string strategies = "all";
  std::string seeds = "0";
  std::string csv;
  int threads = 0;
};

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, sep);) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  try {
    for (const std::string& part : Split(text, ',')) {
      const size_t dash = part.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
        continue;
      }
      const std::uint64_t lo = std::stoull(part.substr(0, dash));
      const std::uint64_t hi = std::stoull(part.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument(part);
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  } catch (const std::logic_error&) {
    throw CommandError{kUsage, "bad --seeds value \"" + text + "\""};
  }
  if (seeds.empty()) throw CommandError{kUsage, "--seeds is empty"};
  return seeds;
}

int Simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig config = a.desk ? DeskScaleConfig() : SimConfig();
  if (!a.config.empty()) {
    std::ifstream in = OpenInput(a.config);
    config = ReadSimConfig(in);
  }
  std::vector<Strategy> strategies;
  if (a.strategies == "all") {
    strategies = AllStrategies();
  } else {
    for (const std::string& name : Split(a.strategies, ',')) {
      const std::optional<Strategy> s = ParseStrategy(name);
      if (!s) throw CommandError{kUsage, "unknown strategy " + name};
      strategies.push_back(*s);
    }
  }
  const std::vector<std::uint64_t> seeds = ParseSeeds(a.seeds);
  const std::vector<SimReport> reports =
      RunComparison(strategies, config, seeds, a.threads);
  WriteFiles({{a.csv, [&](std::ostream& o) { WriteReportCsv(reports, o); }}});

  out << "strategy                 fraction  objective  end_to_end  timeouts\n";
  for (Strategy s : strategies) {
    double fraction = 0.0, objective = 0.0, e2e = 0.0, timeouts = 0.0;
    for (const SimReport& r : reports) {
      if (r.strategy != s) continue;
      fraction += r.totals.fraction_successful;
      objective += r.totals.normalized_objective;
      e2e += r.totals.avg_end_to_end;
      timeouts += r.totals.solver_timeouts;
    }
    const double k = static_cast<double>(seeds.size());
    char line[160];
    std::snprintf(line, sizeof(line), "%-24s %8.4f %10.4f %11.4f %9.2f\n",
                  ToString(s), fraction / k, objective / k, e2e / k, timeouts / k);
    out << line;
  }
  return kOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SmartCrowd worker-to-task assignment indexes", "smartcrowd"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate an instance file");
  gen_cmd->add_option("--config", gen.config, "simulator config (JSON)");
  gen_cmd->add_option("--out", gen.out, "output instance path")->required();
  gen_cmd->add_option("--seed", gen.seed, "override the config seed");
  gen_cmd->add_flag("--example", gen.example, "write the six-worker example");
  gen_cmd->add_flag("--desk", gen.desk, "start from the desk-scale preset");

  BuildArgs build;
  CLI::App* build_cmd = app.add_subcommand("build", "design an index");
  build_cmd->add_option("--instance", build.instance, "instance file")->required();
  build_cmd->add_option("--method", build.method, "exact | greedy | cdex-plus")
      ->check(CLI::IsMember({"exact", "greedy", "cdex-plus"}));
  build_cmd->add_option("--alpha", build.alpha, "cluster diameter for cdex-plus")
      ->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--percentile", build.percentile,
                        "pairwise-distance percentile used when --alpha is absent")
      ->check(CLI::Range(0.0, 100.0));
  build_cmd->add_option("--out", build.out, "output index path")->required();
  build_cmd->add_option("--lp-out", build.lp_out, "also write the program in LP format");
  build_cmd->add_option("--budget", build.budget, "solver node budget")
      ->check(CLI::PositiveNumber);
  build.overrides.Register(build_cmd);

  MaintainArgs maintain;
  CLI::App* maintain_cmd = app.add_subcommand("maintain", "apply churn events to an index");
  maintain_cmd->add_option("--instance", maintain.instance, "instance file")->required();
  maintain_cmd->add_option("--index", maintain.index, "index file")->required();
  maintain_cmd->add_option("--events", maintain.events, "event file")->required();
  maintain_cmd->add_option("--method", maintain.method,
                           "exact | greedy | cdex-plus (default: the index's)")
      ->check(CLI::IsMember({"exact", "greedy", "cdex-plus"}));
  maintain_cmd->add_option("--out", maintain.out, "output index path")->required();
  maintain_cmd->add_option("--instance-out", maintain.instance_out,
                           "output instance path (needed for add/update)");
  maintain_cmd->add_option("--budget", maintain.budget, "solver node budget")
      ->check(CLI::PositiveNumber);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "compare strategies");
  sim_cmd->add_option("--config", sim.config, "simulator config (JSON)");
  sim_cmd->add_flag("--desk", sim.desk, "use the desk-scale preset");
  sim_cmd->add_option("--strategies", sim.strategies,
                      "comma list of Benchmark, OnlineGreedy, OnlineOptimal, CDex, "
                      "OfflineOnlineCDexApprox, CDexPlus, or all");
  sim_cmd->add_option("--seeds", sim.seeds, "comma list of seeds or ranges, e.g. 0-19");
  sim_cmd->add_option("--csv", sim.csv, "output CSV path")->required();
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return Gen(gen, out);
    if (*build_cmd) return Build(build, out);
    if (*maintain_cmd) return Maintain(maintain, out);
    if (*sim_cmd) return Simulate(sim, out);
  } catch (const CommandError& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace smartcrowd::cli
