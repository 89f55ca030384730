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

#include "smartcrowd/io.h"

#include <cmath>
#include <set>

#include "json_util.h"
#include "smartcrowd/objective.h"

namespace smartcrowd {

using internal::CheckKeys;
using internal::GetArray;
using internal::GetInt;
using internal::GetInts;
using internal::GetNumber;
using internal::GetNumbers;
using internal::GetString;
using internal::Json;

namespace {

WorkerProfile ParseWorker(const Json& j, const std::string& where, bool with_id) {
  if (with_id) {
    CheckKeys(j, where, {"id", "skills", "wage", "acceptance_ratio"});
  } else {
    CheckKeys(j, where, {"skills", "wage", "acceptance_ratio"});
  }
  WorkerProfile w;
  if (with_id) w.id = static_cast<WorkerId>(GetInt(j, "id", where));
  w.skills = GetNumbers(j, "skills", where);
  w.wage = GetNumber(j, "wage", where);
  w.acceptance_ratio = GetNumber(j, "acceptance_ratio", where);
  return w;
}

Json WorkerJson(const WorkerProfile& w) {
  return {{"id", w.id},
          {"skills", w.skills},
          {"wage", w.wage},
          {"acceptance_ratio", w.acceptance_ratio}};
}

}  // namespace

Instance ReadInstance(std::istream& in) {
  const Json doc = internal::ParseDocument(in, "instance");
  CheckKeys(doc, "instance",
            {"skill_count", "constraints", "weights", "workers", "tasks"});
  Instance instance;
  instance.workload.skill_count = static_cast<int>(GetInt(doc, "skill_count", "instance"));
  const Json& c = doc.at("constraints");
  CheckKeys(c, "constraints", {"tasks_per_worker_min", "tasks_per_worker_max"});
  instance.constraints.tasks_per_worker_min =
      static_cast<int>(GetInt(c, "tasks_per_worker_min", "constraints"));
  instance.constraints.tasks_per_worker_max =
      static_cast<int>(GetInt(c, "tasks_per_worker_max", "constraints"));
  const Json& w = doc.at("weights");
  CheckKeys(w, "weights", {"w1", "w2"});
  instance.weights = {GetNumber(w, "w1", "weights"), GetNumber(w, "w2", "weights")};
  const Json& workers = GetArray(doc, "workers", "instance");
  for (size_t i = 0; i < workers.size(); ++i) {
    instance.workers.push_back(
        ParseWorker(workers[i], "workers[" + std::to_string(i) + "]", true));
  }
  const Json& tasks = GetArray(doc, "tasks", "instance");
  for (size_t i = 0; i < tasks.size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    CheckKeys(tasks[i], where, {"id", "quality_thresholds", "max_cost"});
    TaskSpec t;
    t.id = static_cast<TaskId>(GetInt(tasks[i], "id", where));
    t.quality_thresholds = GetNumbers(tasks[i], "quality_thresholds", where);
    t.max_cost = GetNumber(tasks[i], "max_cost", where);
    instance.workload.tasks.push_back(t);
  }
  const ValidationReport report = ValidateInstance(instance);
  if (!report.ok()) {
    std::string message = "invalid instance:";
    for (const std::string& v : report.violations) message += "\n  " + v;
    throw ParseError(message);
  }
  return instance;
}

void WriteInstance(const Instance& instance, std::ostream& out) {
  Json workers = Json::array();
  for (const WorkerProfile& w : instance.workers) workers.push_back(WorkerJson(w));
  Json tasks = Json::array();
  for (const TaskSpec& t : instance.workload.tasks) {
    tasks.push_back({{"id", t.id},
                     {"quality_thresholds", t.quality_thresholds},
                     {"max_cost", t.max_cost}});
  }
  const Json doc = {
      {"skill_count", instance.skill_count()},
      {"constraints",
       {{"tasks_per_worker_min", instance.constraints.tasks_per_worker_min},
        {"tasks_per_worker_max", instance.constraints.tasks_per_worker_max}}},
      {"weights", {{"w1", instance.weights.w1}, {"w2", instance.weights.w2}}},
      {"workers", workers},
      {"tasks", tasks}};
  out << doc.dump(2) << '\n';
}

IndexFile ReadIndex(std::istream& in, const Instance& instance) {
  const Json doc = internal::ParseDocument(in, "index");
  CheckKeys(doc, "index", {"method", "value", "unavailable_workers", "indexes"},
            {"clusters"});
  IndexFile index;
  index.method = GetString(doc, "method", "index");
  if (index.method != "exact" && index.method != "greedy" &&
      index.method != "cdex-plus") {
    throw ParseError("index: unknown method \"" + index.method + "\"");
  }
  const int n = instance.worker_count();
  auto check_worker = [n](int u, const std::string& where) {
    if (u < 0 || u >= n) {
      throw ParseError(where + ": unknown worker id " + std::to_string(u));
    }
  };
  index.state = AssignmentState(n, instance.task_count());
  for (int u : GetInts(doc, "unavailable_workers", "index")) {
    check_worker(u, "unavailable_workers");
    index.state.set_available(u, false);
  }
  const Json& entries = GetArray(doc, "indexes", "index");
  if (static_cast<int>(entries.size()) != instance.task_count()) {
    throw ParseError("index: expected one entry per task");
  }
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "indexes[" + std::to_string(i) + "]";
    CheckKeys(entries[i], where,
              {"task_id", "value", "expected_quality", "expected_cost",
               "assigned_workers"});
    const long long t = GetInt(entries[i], "task_id", where);
    if (t != static_cast<long long>(i)) {
      throw ParseError(where + ": task_id must equal its position");
    }
    for (int u : GetInts(entries[i], "assigned_workers", where)) {
      check_worker(u, where);
      if (index.state.contains(static_cast<TaskId>(t), u)) {
        throw ParseError(where + ": worker listed twice");
      }
      index.state.Assign(u, static_cast<TaskId>(t));
    }
    RefreshIndex(index.state, instance, static_cast<TaskId>(t));
    const CDexIndex& fresh = index.state.index(static_cast<TaskId>(t));
    const std::vector<double> quality = GetNumbers(entries[i], "expected_quality", where);
    bool match = quality.size() == fresh.expected_quality.size() &&
                 std::abs(GetNumber(entries[i], "value", where) - fresh.value) <= 1e-9 &&
                 std::abs(GetNumber(entries[i], "expected_cost", where) -
                          fresh.expected_cost) <= 1e-9;
    for (size_t j = 0; match && j < quality.size(); ++j) {
      match = std::abs(quality[j] - fresh.expected_quality[j]) <= 1e-9;
    }
    if (!match) {
      throw ParseError(where + ": stored P vector does not match its workers");
    }
  }
  for (WorkerId u = 0; u < n; ++u) {
    if (index.state.load(u) > instance.constraints.tasks_per_worker_max) {
      throw ParseError("index: worker " + std::to_string(u) + " exceeds X_h");
    }
  }
  if (std::abs(GetNumber(doc, "value", "index") -
               GlobalValue(index.state, instance)) > 1e-9) {
    throw ParseError("index: stored value does not match its indexes");
  }

  if (doc.contains("clusters")) {
    const Json& c = doc.at("clusters");
    CheckKeys(c, "clusters", {"alpha", "next_id", "virtuals"});
    ClusterSet clusters;
    clusters.alpha = GetNumber(c, "alpha", "clusters");
    clusters.next_id = static_cast<int>(GetInt(c, "next_id", "clusters"));
    std::set<WorkerId> seen;
    const Json& virtuals = GetArray(c, "virtuals", "clusters");
    for (size_t i = 0; i < virtuals.size(); ++i) {
      const std::string where = "clusters.virtuals[" + std::to_string(i) + "]";
      CheckKeys(virtuals[i], where, {"id", "members", "cursor"});
      std::vector<WorkerId> members = GetInts(virtuals[i], "members", where);
      if (members.empty()) throw ParseError(where + ": empty cluster");
      for (WorkerId u : members) {
        check_worker(u, where);
        if (!seen.insert(u).second) throw ParseError(where + ": worker in two clusters");
      }
      const int id = static_cast<int>(GetInt(virtuals[i], "id", where));
      const int cursor = static_cast<int>(GetInt(virtuals[i], "cursor", where));
      if (cursor < 0 || cursor >= static_cast<int>(members.size())) {
        throw ParseError(where + ": cursor out of range");
      }
      clusters.virtuals.push_back(MakeVirtualWorker(id, std::move(members),
                                                    instance.workers,
                                                    instance.constraints));
      clusters.cursors.push_back(cursor);
    }
    index.clusters = std::move(clusters);
  } else if (index.method == "cdex-plus") {
    throw ParseError("index: cdex-plus index without clusters");
  }
  return index;
}

void WriteIndex(const IndexFile& index, const Instance& instance,
                std::ostream& out) {
  Json unavailable = Json::array();
  for (WorkerId u = 0; u < index.state.worker_count(); ++u) {
    if (!index.state.available(u)) unavailable.push_back(u);
  }
  Json entries = Json::array();
  for (const CDexIndex& e : index.state.indexes()) {
    entries.push_back({{"task_id", e.task_id},
                       {"value", e.value},
                       {"expected_quality", e.expected_quality},
                       {"expected_cost", e.expected_cost},
                       {"assigned_workers", e.assigned_workers}});
  }
  Json doc = {{"method", index.method},
              {"value", GlobalValue(index.state, instance)},
              {"unavailable_workers", unavailable},
              {"indexes", entries}};
  if (index.clusters) {
    Json virtuals = Json::array();
    for (int c = 0; c < index.clusters->size(); ++c) {
      const VirtualWorker& v = index.clusters->virtuals[c];
      virtuals.push_back({{"id", v.id},
                          {"members", v.members},
                          {"cursor", index.clusters->cursors[c]}});
    }
    doc["clusters"] = {{"alpha", index.clusters->alpha},
                       {"next_id", index.clusters->next_id},
                       {"virtuals", virtuals}};
  }
  out << doc.dump(2) << '\n';
}

const char* ToString(Event::Type type) {
  switch (type) {
    case Event::Type::kDecline:
      return "decline";
    case Event::Type::kAdd:
      return "add";
    case Event::Type::kDelete:
      return "delete";
    case Event::Type::kUpdate:
      return "update";
  }
  return "unknown";
}

std::vector<Event> ReadEvents(std::istream& in) {
  const Json doc = internal::ParseDocument(in, "events");
  CheckKeys(doc, "events", {"events"});
  std::vector<Event> events;
  const Json& list = GetArray(doc, "events", "events");
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string where = "events[" + std::to_string(i) + "]";
    const Json& j = list[i];
    if (!j.is_object() || !j.contains("type")) {
      throw ParseError(where + ": missing field \"type\"");
    }
    const std::string type = GetString(j, "type", where);
    Event e;
    if (type == "decline") {
      CheckKeys(j, where, {"type", "task", "workers"}, {"pool"});
      e.type = Event::Type::kDecline;
      e.task = static_cast<TaskId>(GetInt(j, "task", where));
      e.workers = GetInts(j, "workers", where);
      if (j.contains("pool")) e.pool = GetInts(j, "pool", where);
    } else if (type == "delete") {
      CheckKeys(j, where, {"type", "workers"});
      e.type = Event::Type::kDelete;
      e.workers = GetInts(j, "workers", where);
    } else if (type == "add" || type == "update") {
      CheckKeys(j, where, {"type", "workers"});
      const bool add = type == "add";
      e.type = add ? Event::Type::kAdd : Event::Type::kUpdate;
      const Json& workers = GetArray(j, "workers", where);
      for (size_t k = 0; k < workers.size(); ++k) {
        e.profiles.push_back(ParseWorker(
            workers[k], where + ".workers[" + std::to_string(k) + "]", !add));
      }
    } else {
      throw ParseError(where + ": unknown event type \"" + type + "\"");
    }
    events.push_back(std::move(e));
  }
  return events;
}

void ValidateEvents(const std::vector<Event>& events, const Instance& instance,
                    const AssignmentState& state) {
  int worker_count = instance.worker_count();
  std::vector<char> available(worker_count, 1);
  for (WorkerId u = 0; u < std::min(worker_count, state.worker_count()); ++u) {
    available[u] = state.available(u);
  }
  auto check_profile = [&](const WorkerProfile& w, const std::string& where) {
    if (static_cast<int>(w.skills.size()) != instance.skill_count()) {
      throw ParseError(where + ": skills length must equal the skill count");
    }
    for (double s : w.skills) {
      if (s < 0.0 || s > 1.0) throw ParseError(where + ": skill out of [0,1]");
    }
    if (w.wage < 0.0 || w.wage > 1.0) throw ParseError(where + ": wage out of [0,1]");
    if (w.acceptance_ratio < 0.0 || w.acceptance_ratio > 1.0) {
      throw ParseError(where + ": acceptance ratio out of [0,1]");
    }
  };
  auto check_id = [&](WorkerId u, const std::string& where) {
    if (u < 0 || u >= worker_count) {
      throw ParseError(where + ": unknown worker id " + std::to_string(u));
    }
  };
  for (size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const std::string where = "events[" + std::to_string(i) + "]";
    switch (e.type) {
      case Event::Type::kDecline:
        if (e.task < 0 || e.task >= instance.task_count()) {
          throw ParseError(where + ": unknown task id " + std::to_string(e.task));
        }
        for (WorkerId u : e.workers) check_id(u, where);
        if (e.pool) {
          for (WorkerId u : *e.pool) check_id(u, where);
        }
        break;
      case Event::Type::kAdd:
        for (const WorkerProfile& w : e.profiles) check_profile(w, where);
        worker_count += static_cast<int>(e.profiles.size());
        available.resize(worker_count, 1);
        break;
      case Event::Type::kDelete:
        for (WorkerId u : e.workers) {
          check_id(u, where);
          available[u] = 0;
        }
        break;
      case Event::Type::kUpdate:
        for (const WorkerProfile& w : e.profiles) {
          check_id(w.id, where);
          if (!available[w.id]) {
            throw ParseError(where + ": worker " + std::to_string(w.id) +
                             " was deleted");
          }
          check_profile(w, where);
        }
        break;
    }
  }
}

}  // namespace smartcrowd
