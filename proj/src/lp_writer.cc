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
#include <cstdio>
#include <numeric>

#include "smartcrowd/exact.h"

namespace smartcrowd {
namespace {

constexpr double kInf = 1e300;

std::string Number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string TaskSuffix(const AssignmentProgram& program, int t) {
  return "t" + std::to_string(program.tasks[t].spec.id);
}

std::string Indicator(const AssignmentProgram& program, int t) {
  return "y_" + TaskSuffix(program, t);
}

std::string Carrier(const AssignmentProgram& program, int t) {
  return "z_" + TaskSuffix(program, t);
}

struct TaskConstants {
  double base_value = 0.0;  // W1 * sum(q) + W2 * (1 - w / W) at the residual
  double upper = 0.0;       // largest reachable value
  double lower = 0.0;       // smallest value of the linear expression
};

TaskConstants Constants(const AssignmentProgram& program, int t,
                        const std::vector<std::vector<int>>& vars_of_task,
                        const std::vector<double>& gain) {
  const ProgramTask& task = program.tasks[t];
  TaskConstants k;
  const double quality =
      std::accumulate(task.base.quality.begin(), task.base.quality.end(), 0.0);
  if (task.spec.max_cost > 0.0) {
    k.base_value = program.weights.w1 * quality +
                   program.weights.w2 * (1.0 - task.base.cost / task.spec.max_cost);
  } else {
    k.base_value = program.weights.w1 * quality + program.weights.w2;
  }
  k.upper = k.base_value;
  k.lower = k.base_value;
  for (int v : vars_of_task[t]) {
    const int ub = program.variables[v].upper;
    k.upper += std::max(0.0, gain[v]) * ub;
    k.lower += std::min(0.0, gain[v]) * ub;
  }
  k.upper = std::max(0.0, k.upper);
  k.lower = std::min(0.0, k.lower);
  return k;
}

}  // namespace

std::string VariableName(const AssignmentProgram& program, int variable) {
  const ProgramVariable& var = program.variables.at(variable);
  const ProgramColumn& col = program.columns[var.column];
  return (col.is_virtual ? "v" : "w") + std::to_string(col.id) + "_" +
         TaskSuffix(program, var.task);
}

std::vector<LinearRow> LinearRows(const AssignmentProgram& program) {
  using Kind = LinearRow::Kind;
  const int task_count = static_cast<int>(program.tasks.size());
  std::vector<std::vector<int>> vars_of_task(task_count);
  std::vector<double> gain(program.variable_count(), 0.0);
  for (int v = 0; v < program.variable_count(); ++v) {
    const ProgramVariable& var = program.variables[v];
    vars_of_task[var.task].push_back(v);
    const ProgramColumn& col = program.columns[var.column];
    const double budget = program.tasks[var.task].spec.max_cost;
    gain[v] = program.weights.w1 *
                  std::accumulate(col.quality.begin(), col.quality.end(), 0.0) -
              (budget > 0.0 ? program.weights.w2 * col.cost / budget : 0.0);
  }

  std::vector<LinearRow> rows;
  for (int t = 0; t < task_count; ++t) {
    const ProgramTask& task = program.tasks[t];
    const std::string suffix = TaskSuffix(program, t);
    const std::string y = Indicator(program, t);

    // sum(q x) >= (Q - base) y, i.e. the big-M is the threshold itself.
    for (int j = 0; j < program.skill_count; ++j) {
      const double threshold = task.spec.quality_thresholds[j];
      if (threshold <= 0.0) continue;
      LinearRow row{Kind::kQuality, "q_" + suffix + "_s" + std::to_string(j), {}};
      for (int v : vars_of_task[t]) {
        const double q = program.columns[program.variables[v].column].quality[j];
        if (q != 0.0) row.terms.push_back({VariableName(program, v), q});
      }
      row.terms.push_back({y, -threshold});
      row.lower = -task.base.quality[j];
      rows.push_back(std::move(row));
    }

    LinearRow cost{Kind::kCost, "c_" + suffix, {}};
    if (task.spec.max_cost > 0.0) {
      double big_m = task.base.cost - task.spec.max_cost;
      for (int v : vars_of_task[t]) {
        const ProgramVariable& var = program.variables[v];
        const double c = program.columns[var.column].cost;
        big_m += c * var.upper;
        if (c != 0.0) cost.terms.push_back({VariableName(program, v), c});
      }
      big_m = std::max(0.0, big_m);
      cost.terms.push_back({y, big_m});
      cost.upper = task.spec.max_cost - task.base.cost + big_m;
    } else {
      // A zero budget only admits the empty team.
      double big_m = task.base.count;
      for (int v : vars_of_task[t]) {
        big_m += program.variables[v].upper;
        cost.terms.push_back({VariableName(program, v), 1.0});
      }
      cost.terms.push_back({y, big_m});
      cost.upper = big_m - task.base.count;
    }
    rows.push_back(std::move(cost));

    const TaskConstants k = Constants(program, t, vars_of_task, gain);
    LinearRow cap{Kind::kValueCap, "vc_" + suffix, {}};
    cap.terms = {{Carrier(program, t), 1.0}, {y, -k.upper}};
    cap.upper = 0.0;
    rows.push_back(std::move(cap));

    // z <= base + sum(g x) when y = 1; relaxed by the lower bound otherwise.
    LinearRow link{Kind::kValueLink, "vl_" + suffix, {}};
    link.terms.push_back({Carrier(program, t), 1.0});
    if (task.spec.max_cost > 0.0) {
      for (int v : vars_of_task[t]) {
        if (gain[v] != 0.0) link.terms.push_back({VariableName(program, v), -gain[v]});
      }
    }
    link.terms.push_back({y, -k.lower});
    link.upper = k.base_value - k.lower;
    rows.push_back(std::move(link));
  }

  std::vector<std::vector<int>> vars_of_column(program.columns.size());
  for (int v = 0; v < program.variable_count(); ++v) {
    vars_of_column[program.variables[v].column].push_back(v);
  }
  for (size_t c = 0; c < program.columns.size(); ++c) {
    const ProgramColumn& col = program.columns[c];
    LinearRow row{Kind::kCardinality,
                  std::string(col.is_virtual ? "nv" : "nw") + std::to_string(col.id),
                  {}};
    for (int v : vars_of_column[c]) row.terms.push_back({VariableName(program, v), 1.0});
    row.lower = col.min_total;
    row.upper = col.max_total;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

void WriteTerms(std::ostream& out, const std::vector<LinearTerm>& terms,
                bool& used_dummy) {
  int on_line = 0;
  for (size_t i = 0; i < terms.size(); ++i) {
    const double c = terms[i].coefficient;
    if (i > 0 || c < 0.0) out << (c < 0.0 ? " - " : " + ");
    out << Number(std::abs(c)) << ' ' << terms[i].variable;
    if (++on_line == 6 && i + 1 < terms.size()) {
      out << "\n   ";
      on_line = 0;
    }
  }
  if (terms.empty()) {
    out << "0 y_dummy";
    used_dummy = true;
  }
}

}  // namespace

void WriteLpFile(const AssignmentProgram& program, std::ostream& out) {
  const int task_count = static_cast<int>(program.tasks.size());
  out << "\\ smartcrowd assignment program\n";
  out << "\\ tasks " << task_count << ", columns " << program.columns.size()
      << ", variables " << program.variable_count() << "\n";
  bool used_dummy = task_count == 0;
  out << "Maximize\n obj:";
  if (task_count == 0) out << " 0 y_dummy";
  for (int t = 0; t < task_count; ++t) {
    out << (t == 0 ? " " : " + ") << Carrier(program, t);
  }
  out << "\nSubject To\n";
  for (const LinearRow& row : LinearRows(program)) {
    const bool has_lower = row.lower > -kInf;
    const bool has_upper = row.upper < kInf;
    if (has_lower && has_upper && row.lower != row.upper) {
      out << ' ' << row.name << "_lo: ";
      WriteTerms(out, row.terms, used_dummy);
      out << " >= " << Number(row.lower) << '\n';
      out << ' ' << row.name << "_hi: ";
      WriteTerms(out, row.terms, used_dummy);
      out << " <= " << Number(row.upper) << '\n';
      continue;
    }
    out << ' ' << row.name << ": ";
    WriteTerms(out, row.terms, used_dummy);
    if (has_lower && has_upper) {
      out << " = " << Number(row.lower) << '\n';
    } else if (has_lower) {
      out << " >= " << Number(row.lower) << '\n';
    } else {
      out << " <= " << Number(row.upper) << '\n';
    }
  }

  out << "Bounds\n";
  for (int t = 0; t < task_count; ++t) {
    out << " -inf <= " << Carrier(program, t) << " <= +inf\n";
    if (program.tasks[t].must_be_satisfied) {
      out << ' ' << Indicator(program, t) << " = 1\n";
    }
  }
  std::vector<std::string> binaries, generals;
  for (int v = 0; v < program.variable_count(); ++v) {
    const std::string name = VariableName(program, v);
    const int upper = program.variables[v].upper;
    if (auto it = program.frozen.find(v); it != program.frozen.end()) {
      out << ' ' << name << " = " << it->second << '\n';
      (upper == 1 ? binaries : generals).push_back(name);
      continue;
    }
    if (upper == 1) {
      binaries.push_back(name);
    } else {
      out << " 0 <= " << name << " <= " << upper << '\n';
      generals.push_back(name);
    }
  }
  for (int t = 0; t < task_count; ++t) binaries.push_back(Indicator(program, t));
  if (used_dummy) out << " y_dummy = 0\n";
  auto section = [&out](const char* title, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out << title << '\n';
    for (size_t i = 0; i < names.size(); ++i) {
      out << ' ' << names[i];
      if (i % 8 == 7 || i + 1 == names.size()) out << '\n';
    }
  };
  section("Binaries", binaries);
  section("Generals", generals);
  out << "End\n";
}

}  // namespace smartcrowd
