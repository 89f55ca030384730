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

#include <gtest/gtest.h>

#include <sstream>

#include "smartcrowd/exact.h"
#include "smartcrowd/greedy.h"
#include "smartcrowd/virtual_workers.h"
#include "test_util.h"

namespace smartcrowd {
namespace {

std::string Dump(const Instance& instance) {
  std::ostringstream out;
  WriteInstance(instance, out);
  return out.str();
}

Instance Load(const std::string& text) {
  std::istringstream in(text);
  return ReadInstance(in);
}

AssignmentState ExactExampleState() {
  const Instance instance = ExampleInstance();
  const AssignmentProgram program = BuildDesignProgram(instance);
  return StateFromSolution(program, Solve(program), instance);
}

TEST(InstanceIoTest, RoundTripIsExact) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    testing::RandomInstanceOptions o;
    o.skills = 1 + seed % 3;
    const Instance instance = testing::RandomInstance(seed, o);
    EXPECT_EQ(Load(Dump(instance)), instance);
  }
  EXPECT_EQ(Load(Dump(ExampleInstance())), ExampleInstance());
}

TEST(InstanceIoTest, RejectsUnknownAndMissingFields) {
  std::string text = Dump(ExampleInstance());
  std::string unknown = text;
  unknown.insert(unknown.find("\"workers\""), "\"colour\": 1,\n  ");
  EXPECT_THROW(Load(unknown), ParseError);

  std::string missing = text;
  missing.replace(missing.find("\"max_cost\""), 10, "\"maxcost\"");
  EXPECT_THROW(Load(missing), ParseError);

  EXPECT_THROW(Load("{ not json"), ParseError);
  EXPECT_THROW(Load("[]"), ParseError);
}

TEST(InstanceIoTest, RejectsOutOfRangeValues) {
  Instance instance = ExampleInstance();
  instance.workers[0].wage = 1.5;
  EXPECT_THROW(Load(Dump(instance)), ParseError);
  instance = ExampleInstance();
  instance.workers[0].skills.push_back(0.5);
  EXPECT_THROW(Load(Dump(instance)), ParseError);
}

TEST(IndexIoTest, RoundTripAndRecomputedAggregates) {
  const Instance instance = ExampleInstance();
  IndexFile index{"exact", ExactExampleState(), std::nullopt};
  std::ostringstream out;
  WriteIndex(index, instance, out);
  std::istringstream in(out.str());
  const IndexFile back = ReadIndex(in, instance);
  EXPECT_EQ(back.method, "exact");
  EXPECT_EQ(back.state, index.state);
  EXPECT_FALSE(back.clusters.has_value());
}

TEST(IndexIoTest, RejectsTamperedVectors) {
  const Instance instance = ExampleInstance();
  IndexFile index{"exact", ExactExampleState(), std::nullopt};
  std::ostringstream out;
  WriteIndex(index, instance, out);
  std::string text = out.str();
  // The first task's stored cost is 0.575; claim 0.5 instead.
  const size_t at = text.find("0.575");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 5, "0.5");
  std::istringstream in(text);
  EXPECT_THROW(ReadIndex(in, instance), ParseError);
}

TEST(IndexIoTest, ClustersRoundTrip) {
  const Instance instance = ExampleInstance();
  CDexPlusDesign design = DesignCDexPlus(instance, 0.25);
  IndexFile index{"cdex-plus", design.state, design.clusters};
  std::ostringstream out;
  WriteIndex(index, instance, out);
  std::istringstream in(out.str());
  const IndexFile back = ReadIndex(in, instance);
  ASSERT_TRUE(back.clusters.has_value());
  EXPECT_EQ(back.clusters->virtuals, design.clusters.virtuals);
  EXPECT_EQ(back.clusters->cursors, design.clusters.cursors);
  EXPECT_EQ(back.clusters->next_id, design.clusters.next_id);
}

TEST(IndexIoTest, CDexPlusNeedsClusters) {
  const Instance instance = ExampleInstance();
  IndexFile index{"cdex-plus", ExactExampleState(), std::nullopt};
  std::ostringstream out;
  WriteIndex(index, instance, out);
  std::istringstream in(out.str());
  EXPECT_THROW(ReadIndex(in, instance), ParseError);
}

std::vector<Event> Events(const std::string& text) {
  std::istringstream in(text);
  return ReadEvents(in);
}

TEST(EventIoTest, ParsesEveryType) {
  const std::vector<Event> events = Events(R"({"events": [
    {"type": "decline", "task": 0, "workers": [5], "pool": [2, 3]},
    {"type": "add", "workers": [{"skills": [0.5], "wage": 0.2, "acceptance_ratio": 0.9}]},
    {"type": "delete", "workers": [6]},
    {"type": "update", "workers": [{"id": 1, "skills": [0.4], "wage": 0.3, "acceptance_ratio": 0.7}]}
  ]})");
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(events[0].type, Event::Type::kDecline);
  EXPECT_EQ(events[0].pool, (std::vector<WorkerId>{2, 3}));
  EXPECT_EQ(events[1].type, Event::Type::kAdd);
  EXPECT_EQ(events[1].profiles.size(), 1u);
  EXPECT_EQ(events[2].workers, (std::vector<WorkerId>{6}));
  EXPECT_EQ(events[3].profiles[0].id, 1);
  // The added worker gets id 6, so deleting it afterwards is valid.
  EXPECT_NO_THROW(ValidateEvents(events, ExampleInstance(), ExactExampleState()));
  EXPECT_TRUE(Events(R"({"events": []})").empty());
}

TEST(EventIoTest, ValidationCatchesBadReferences) {
  const Instance instance = ExampleInstance();
  const AssignmentState state = ExactExampleState();
  EXPECT_THROW(ValidateEvents(Events(R"({"events": [{"type": "delete", "workers": [6]}]})"),
                              instance, state),
               ParseError);
  EXPECT_THROW(ValidateEvents(Events(R"({"events": [{"type": "decline", "task": 3, "workers": [0]}]})"),
                              instance, state),
               ParseError);
  EXPECT_THROW(
      ValidateEvents(Events(R"({"events": [{"type": "delete", "workers": [1]},
        {"type": "update", "workers": [{"id": 1, "skills": [0.4], "wage": 0.3, "acceptance_ratio": 0.7}]}]})"),
                     instance, state),
      ParseError);
  EXPECT_THROW(
      ValidateEvents(Events(R"({"events": [{"type": "add", "workers": [{"skills": [0.4, 0.1], "wage": 0.3, "acceptance_ratio": 0.7}]}]})"),
                     instance, state),
      ParseError);
}

TEST(EventIoTest, RejectsMalformedEvents) {
  EXPECT_THROW(Events(R"({"events": [{"type": "resign", "workers": [1]}]})"), ParseError);
  EXPECT_THROW(Events(R"({"events": [{"type": "delete", "workers": [1], "task": 0}]})"),
               ParseError);
  EXPECT_THROW(Events(R"({"events": [{"type": "add", "workers": [{"id": 3, "skills": [0.4], "wage": 0.3, "acceptance_ratio": 0.7}]}]})"),
               ParseError);
  EXPECT_THROW(Events(R"({"events": [{"workers": [1]}]})"), ParseError);
  EXPECT_THROW(Events(R"({"evts": []})"), ParseError);
}

}  // namespace
}  // namespace smartcrowd
