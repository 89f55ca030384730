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

#include <cmath>
#include <functional>
#include <string>

#include "json_util.h"
#include "smartcrowd/io.h"
#include "smartcrowd/sim.h"

namespace smartcrowd {

using internal::Json;

namespace {

void CheckNormal(const NormalSpec& n, const char* name,
                 std::vector<std::string>& errors) {
  if (!std::isfinite(n.mean)) errors.push_back(std::string(name) + ".mean must be finite");
  if (!(n.variance >= 0.0) || !std::isfinite(n.variance)) {
    errors.push_back(std::string(name) + ".variance must be >= 0");
  }
}

Json NormalJson(const NormalSpec& n) {
  return {{"mean", n.mean}, {"variance", n.variance}};
}

}  // namespace

std::vector<std::string> ValidateSimConfig(const SimConfig& c) {
  std::vector<std::string> errors;
  if (!(c.duration >= 0.0) || !std::isfinite(c.duration)) {
    errors.push_back("duration must be >= 0");
  }
  if (c.worker_count < 0) errors.push_back("worker_count must be >= 0");
  if (c.skill_count < 1) errors.push_back("skill_count must be >= 1");
  if (c.skills_per_task < 1 || c.skills_per_task > c.skill_count) {
    errors.push_back("skills_per_task must lie in [1, skill_count]");
  }
  CheckNormal(c.skill, "skill", errors);
  CheckNormal(c.wage, "wage", errors);
  CheckNormal(c.acceptance, "acceptance", errors);
  CheckNormal(c.task_size, "task_size", errors);
  CheckNormal(c.threshold_factor, "threshold_factor", errors);
  CheckNormal(c.cost_factor, "cost_factor", errors);
  if (!(c.weights.w1 >= 0.0 && c.weights.w1 <= 1.0) ||
      !(c.weights.w2 >= 0.0 && c.weights.w2 <= 1.0) ||
      std::abs(c.weights.w1 + c.weights.w2 - 1.0) > kTolerance) {
    errors.push_back("weights must lie in [0,1] and sum to 1");
  }
  if (!(c.worker_arrival_rate > 0.0)) errors.push_back("worker_arrival_rate must be > 0");
  if (!(c.task_arrival_rate > 0.0)) errors.push_back("task_arrival_rate must be > 0");
  if (c.workload_size < 0) errors.push_back("workload_size must be >= 0");
  if (!(c.session_mean > 0.0)) errors.push_back("session_mean must be > 0");
  if (!(c.task_duration_mean > 0.0)) errors.push_back("task_duration_mean must be > 0");
  if (c.constraints.tasks_per_worker_min < 0 ||
      c.constraints.tasks_per_worker_max < 1 ||
      c.constraints.tasks_per_worker_min > c.constraints.tasks_per_worker_max) {
    errors.push_back("constraints must satisfy 0 <= tasks_per_worker_min <= "
                     "tasks_per_worker_max and tasks_per_worker_max >= 1");
  }
  if (!(c.cluster_percentile >= 0.0 && c.cluster_percentile <= 100.0)) {
    errors.push_back("cluster_percentile must lie in [0, 100]");
  }
  if (c.solver_node_limit < 1) errors.push_back("solver_node_limit must be >= 1");
  if (c.design_node_limit < 1) errors.push_back("design_node_limit must be >= 1");
  if (c.sample_count < 1) errors.push_back("sample_count must be >= 1");
  return errors;
}

SimConfig ReadSimConfig(std::istream& in) {
  const Json doc = internal::ParseDocument(in, "config");
  if (!doc.is_object()) throw ParseError("config: expected an object");
  SimConfig c;
  std::vector<std::string> errors;

  auto field = [&](const Json& obj, const std::string& key,
                   const std::function<void(const Json&)>& read) {
    if (!obj.contains(key)) return;
    try {
      read(obj.at(key));
    } catch (const std::exception&) {
      errors.push_back(key + " has the wrong type");
    }
  };
  auto number = [](const Json& v) {
    if (!v.is_number()) throw std::invalid_argument("number");
    return v.get<double>();
  };
  auto integer = [](const Json& v) {
    if (!v.is_number_integer()) throw std::invalid_argument("integer");
    return v.get<std::int64_t>();
  };
  auto normal = [&](const char* key, NormalSpec& out) {
    field(doc, key, [&](const Json& v) {
      if (!v.is_object()) throw std::invalid_argument("object");
      for (const auto& [k, unused] : v.items()) {
        if (k != "mean" && k != "variance") {
          errors.push_back(std::string(key) + ": unknown field \"" + k + "\"");
        }
      }
      if (v.contains("mean")) out.mean = number(v.at("mean"));
      if (v.contains("variance")) out.variance = number(v.at("variance"));
    });
  };

  static const char* const kKnown[] = {
      "duration", "worker_count", "skill_count", "skills_per_task",
      "workload_size", "worker_arrival_rate", "task_arrival_rate",
      "session_mean", "task_duration_mean", "cluster_percentile",
      "solver_node_limit", "design_node_limit", "sample_count", "seed",
      "audit", "skill", "wage", "acceptance", "task_size",
      "threshold_factor", "cost_factor", "weights", "constraints"};
  for (const auto& [key, unused] : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) errors.push_back("unknown field \"" + key + "\"");
  }

  field(doc, "duration", [&](const Json& v) { c.duration = number(v); });
  field(doc, "worker_count", [&](const Json& v) { c.worker_count = static_cast<int>(integer(v)); });
  field(doc, "skill_count", [&](const Json& v) { c.skill_count = static_cast<int>(integer(v)); });
  field(doc, "skills_per_task", [&](const Json& v) { c.skills_per_task = static_cast<int>(integer(v)); });
  field(doc, "workload_size", [&](const Json& v) { c.workload_size = static_cast<int>(integer(v)); });
  field(doc, "worker_arrival_rate", [&](const Json& v) { c.worker_arrival_rate = number(v); });
  field(doc, "task_arrival_rate", [&](const Json& v) { c.task_arrival_rate = number(v); });
  field(doc, "session_mean", [&](const Json& v) { c.session_mean = number(v); });
  field(doc, "task_duration_mean", [&](const Json& v) { c.task_duration_mean = number(v); });
  field(doc, "cluster_percentile", [&](const Json& v) { c.cluster_percentile = number(v); });
  field(doc, "solver_node_limit", [&](const Json& v) { c.solver_node_limit = integer(v); });
  field(doc, "design_node_limit", [&](const Json& v) { c.design_node_limit = integer(v); });
  field(doc, "sample_count", [&](const Json& v) { c.sample_count = static_cast<int>(integer(v)); });
  field(doc, "seed", [&](const Json& v) {
    if (!v.is_number_unsigned()) throw std::invalid_argument("seed");
    c.seed = v.get<std::uint64_t>();
  });
  field(doc, "audit", [&](const Json& v) {
    if (!v.is_boolean()) throw std::invalid_argument("bool");
    c.audit = v.get<bool>();
  });
  normal("skill", c.skill);
  normal("wage", c.wage);
  normal("acceptance", c.acceptance);
  normal("task_size", c.task_size);
  normal("threshold_factor", c.threshold_factor);
  normal("cost_factor", c.cost_factor);
  field(doc, "weights", [&](const Json& v) {
    if (!v.is_object()) throw std::invalid_argument("object");
    for (const auto& [k, unused] : v.items()) {
      if (k != "w1" && k != "w2") errors.push_back("weights: unknown field \"" + k + "\"");
    }
    if (v.contains("w1")) {
      c.weights = ObjectiveWeights::FromSkillWeight(number(v.at("w1")));
    }
    if (v.contains("w2")) c.weights.w2 = number(v.at("w2"));
  });
  field(doc, "constraints", [&](const Json& v) {
    if (!v.is_object()) throw std::invalid_argument("object");
    for (const auto& [k, unused] : v.items()) {
      if (k != "tasks_per_worker_min" && k != "tasks_per_worker_max") {
        errors.push_back("constraints: unknown field \"" + k + "\"");
      }
    }
    if (v.contains("tasks_per_worker_min")) {
      c.constraints.tasks_per_worker_min =
          static_cast<int>(integer(v.at("tasks_per_worker_min")));
    }
    if (v.contains("tasks_per_worker_max")) {
      c.constraints.tasks_per_worker_max =
          static_cast<int>(integer(v.at("tasks_per_worker_max")));
    }
  });

  for (std::string& e : ValidateSimConfig(c)) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string message = "invalid config:";
    for (const std::string& e : errors) message += "\n  " + e;
    throw ParseError(message);
  }
  return c;
}

void WriteSimConfig(const SimConfig& c, std::ostream& out) {
  const Json doc = {
      {"duration", c.duration},
      {"worker_count", c.worker_count},
      {"skill_count", c.skill_count},
      {"skills_per_task", c.skills_per_task},
      {"workload_size", c.workload_size},
      {"worker_arrival_rate", c.worker_arrival_rate},
      {"task_arrival_rate", c.task_arrival_rate},
      {"session_mean", c.session_mean},
      {"task_duration_mean", c.task_duration_mean},
      {"cluster_percentile", c.cluster_percentile},
      {"solver_node_limit", c.solver_node_limit},
      {"design_node_limit", c.design_node_limit},
      {"sample_count", c.sample_count},
      {"seed", c.seed},
      {"audit", c.audit},
      {"skill", NormalJson(c.skill)},
      {"wage", NormalJson(c.wage)},
      {"acceptance", NormalJson(c.acceptance)},
      {"task_size", NormalJson(c.task_size)},
      {"threshold_factor", NormalJson(c.threshold_factor)},
      {"cost_factor", NormalJson(c.cost_factor)},
      {"weights", {{"w1", c.weights.w1}, {"w2", c.weights.w2}}},
      {"constraints",
       {{"tasks_per_worker_min", c.constraints.tasks_per_worker_min},
        {"tasks_per_worker_max", c.constraints.tasks_per_worker_max}}}};
  out << doc.dump(2) << '\n';
}

SimConfig DeskScaleConfig() {
  SimConfig c;
  c.duration = 60.0;
  c.worker_count = 50;
  c.workload_size = 20;
  c.task_size = {1.5, 0.03};
  c.task_arrival_rate = 1.0;
  c.task_duration_mean = 60.0;
  c.constraints = {0, 1};
  return c;
}

}  // namespace smartcrowd
