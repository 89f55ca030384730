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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string_view>

#include "smartcrowd/sim.h"

namespace smartcrowd {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator per named stream.
std::mt19937_64 Stream(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : name) h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
  return std::mt19937_64(SplitMix64(seed ^ SplitMix64(h)));
}

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

class Sampler {
 public:
  explicit Sampler(std::mt19937_64& rng) : rng_(rng) {}
  double Normal(const NormalSpec& n) {
    if (n.variance <= 0.0) return n.mean;
    return std::normal_distribution<double>(n.mean, std::sqrt(n.variance))(rng_);
  }

 private:
  std::mt19937_64& rng_;
};

void CheckConfig(const SimConfig& config) {
  const std::vector<std::string> errors = ValidateSimConfig(config);
  if (errors.empty()) return;
  std::string message = "invalid config:";
  for (const std::string& e : errors) message += "\n  " + e;
  throw std::invalid_argument(message);
}

}  // namespace

Instance GenerateInstance(const SimConfig& config) {
  CheckConfig(config);
  std::mt19937_64 rng = Stream(config.seed, "scenario");
  Sampler sample(rng);
  Instance instance;
  instance.constraints = config.constraints;
  instance.weights = config.weights;
  instance.workload.skill_count = config.skill_count;
  for (int i = 0; i < config.worker_count; ++i) {
    WorkerProfile w;
    w.id = i;
    for (int j = 0; j < config.skill_count; ++j) {
      w.skills.push_back(Clamp01(sample.Normal(config.skill)));
    }
    w.wage = Clamp01(sample.Normal(config.wage));
    w.acceptance_ratio = Clamp01(sample.Normal(config.acceptance));
    instance.workers.push_back(std::move(w));
  }
  std::vector<int> skills(config.skill_count);
  std::iota(skills.begin(), skills.end(), 0);
  for (int t = 0; t < config.workload_size; ++t) {
    TaskSpec task;
    task.id = t;
    task.quality_thresholds.assign(config.skill_count, 0.0);
    std::shuffle(skills.begin(), skills.end(), rng);
    for (int k = 0; k < config.skills_per_task; ++k) {
      const double size = std::max(0.0, sample.Normal(config.task_size));
      task.quality_thresholds[skills[k]] =
          size * Clamp01(sample.Normal(config.threshold_factor));
    }
    const double size = std::max(0.0, sample.Normal(config.task_size));
    task.max_cost = size * Clamp01(sample.Normal(config.cost_factor));
    instance.workload.tasks.push_back(std::move(task));
  }
  return instance;
}

Scenario GenerateScenario(const SimConfig& config) {
  Scenario scenario;
  scenario.instance = GenerateInstance(config);

  std::mt19937_64 arrivals = Stream(config.seed, "arrivals");
  std::vector<TaskId> order(config.workload_size);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), arrivals);
  std::exponential_distribution<double> task_gap(config.task_arrival_rate);
  std::exponential_distribution<double> task_duration(1.0 / config.task_duration_mean);
  double time = 0.0;
  for (TaskId t : order) {
    time += task_gap(arrivals);
    if (time >= config.duration) break;
    scenario.task_arrivals.push_back({time, t, task_duration(arrivals)});
  }

  if (config.worker_count > 0) {
    std::mt19937_64 sessions = Stream(config.seed, "sessions");
    std::exponential_distribution<double> worker_gap(config.worker_arrival_rate);
    std::exponential_distribution<double> session(1.0 / config.session_mean);
    std::uniform_int_distribution<int> pick(0, config.worker_count - 1);
    time = 0.0;
    while (true) {
      time += worker_gap(sessions);
      if (time >= config.duration) break;
      const WorkerId u = pick(sessions);
      scenario.worker_arrivals.push_back({time, u, session(sessions)});
    }
  }
  return scenario;
}

double AcceptanceDraw(std::uint64_t seed, WorkerId worker, TaskId task) {
  const std::uint64_t key =
      SplitMix64(SplitMix64(seed ^ 0x61636365707421ULL) ^
                 SplitMix64(static_cast<std::uint64_t>(worker) << 32 |
                            static_cast<std::uint32_t>(task)));
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

}  // namespace smartcrowd
