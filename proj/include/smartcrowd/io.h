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

// JSON file formats for instances, indexes and maintenance events. Readers
// reject unknown fields, missing fields and wrongly typed values with
// ParseError; nothing is partially applied.
//
// Instance:
//   {"skill_count": m,
//    "constraints": {"tasks_per_worker_min": X_l, "tasks_per_worker_max": X_h},
//    "weights": {"w1": W1, "w2": W2},
//    "workers": [{"id": 0, "skills": [...], "wage": w, "acceptance_ratio": p}],
//    "tasks": [{"id": 0, "quality_thresholds": [...], "max_cost": W}]}
//
// Index:
//   {"method": "exact" | "greedy" | "cdex-plus", "value": V,
//    "unavailable_workers": [ids],
//    "indexes": [{"task_id": t, "value": v, "expected_quality": [...],
//                 "expected_cost": w, "assigned_workers": [ids]}],
//    "clusters": {"alpha": a, "next_id": k,
//                 "virtuals": [{"id": i, "members": [ids], "cursor": c}]}}
//   "clusters" is present only for cdex-plus.
//
// Events:
//   {"events": [
//     {"type": "decline", "task": t, "workers": [ids], "pool": [ids]},
//     {"type": "add", "workers": [worker records without "id"]},
//     {"type": "delete", "workers": [ids]},
//     {"type": "update", "workers": [worker records]}]}
//   "pool" is optional; without it every available worker is a candidate.

#ifndef SMARTCROWD_IO_H_
#define SMARTCROWD_IO_H_

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smartcrowd/model.h"
#include "smartcrowd/virtual_workers.h"

namespace smartcrowd {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance ReadInstance(std::istream& in);
void WriteInstance(const Instance& instance, std::ostream& out);

struct IndexFile {
  std::string method;
  AssignmentState state;
  std::optional<ClusterSet> clusters;
};

// Stored P vectors and values must match recomputation within 1e-9.
IndexFile ReadIndex(std::istream& in, const Instance& instance);
void WriteIndex(const IndexFile& index, const Instance& instance,
                std::ostream& out);

struct Event {
  enum class Type { kDecline, kAdd, kDelete, kUpdate };
  Type type = Type::kDecline;
  TaskId task = -1;                    // decline only
  std::vector<WorkerId> workers;       // decline, delete
  std::optional<std::vector<WorkerId>> pool;  // decline only
  std::vector<WorkerProfile> profiles;  // add (ids assigned on apply), update
};
const char* ToString(Event::Type type);

std::vector<Event> ReadEvents(std::istream& in);

// Throws ParseError naming the first event whose references are invalid,
// simulating the whole sequence (ids added by earlier events count).
void ValidateEvents(const std::vector<Event>& events, const Instance& instance,
                    const AssignmentState& state);

}  // namespace smartcrowd

#endif  // SMARTCROWD_IO_H_
