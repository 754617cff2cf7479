// Copyright 2026 The dsbsim Authors
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

#include <gtest/gtest.h>

#include "support.hpp"

namespace dsb {
namespace {

using test::str;

const char* kExamplePath =
    "kasa>structures/home1/away>routine:camera-off-when-home>devices/cameras/cam1/is_streaming";

TEST(MayTriggerTest, ValueAware) {
  EXPECT_TRUE(may_trigger(Predicate::equals(str("home")), std::nullopt));
  EXPECT_TRUE(may_trigger(Predicate::equals(str("home")), str("home")));
  EXPECT_FALSE(may_trigger(Predicate::equals(str("home")), str("away")));
  EXPECT_TRUE(may_trigger(Predicate::changed(), Value(false)));
  EXPECT_TRUE(may_trigger(Predicate::crossed(25, Predicate::Direction::Up), Value(30.0)));
  EXPECT_FALSE(may_trigger(Predicate::crossed(25, Predicate::Direction::Up), Value(20.0)));
  EXPECT_TRUE(may_trigger(Predicate::crossed(25, Predicate::Direction::Down), Value(20.0)));
}

class ExampleHomeGraph : public ::testing::Test {
 protected:
  std::unique_ptr<Platform> make(PolicyMode mode) {
    auto p = test::nest_platform(mode);
    test::install_example_home(*p);
    return p;
  }
};

TEST_F(ExampleHomeGraph, NodesAndEdges) {
  const auto p = make(PolicyMode::NestFaithful);
  const auto g = build_graph(*p);
  const auto kasa = g.find(NodeKind::Principal, "kasa");
  const auto away = g.find(NodeKind::Variable, "structures/home1/away");
  const auto routine = g.find(NodeKind::Routine, "camera-off-when-home");
  const auto stream = g.find(NodeKind::Variable, "devices/cameras/cam1/is_streaming");
  ASSERT_TRUE(kasa && away && routine && stream);
  EXPECT_EQ(g.nodes[*kasa].integrity, Integrity::Low);
  EXPECT_EQ(g.nodes[*stream].integrity, Integrity::High);
  EXPECT_TRUE(g.has_edge(*kasa, *away, EdgeKind::Writes));
  EXPECT_FALSE(g.has_edge(*kasa, *stream, EdgeKind::Writes));
  EXPECT_TRUE(g.has_edge(*away, *routine, EdgeKind::Triggers));
  EXPECT_TRUE(g.has_edge(*routine, *stream, EdgeKind::ActsOn));
  // Principals come first, sorted by id.
  EXPECT_EQ(g.nodes[0].kind, NodeKind::Principal);
  EXPECT_EQ(g.nodes[0].id, "kasa");
  const auto j = g.to_json();
  EXPECT_EQ(j["nodes"].size(), g.nodes.size());
  EXPECT_EQ(j["edges"].size(), g.edges.size());
}

TEST_F(ExampleHomeGraph, FindsTheCameraEscalation) {
  const auto p = make(PolicyMode::NestFaithful);
  const auto g = build_graph(*p);
  const auto paths = find_escalations(g);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(test::render_paths(g, paths), std::vector<std::string>{kExamplePath});
  EXPECT_FALSE(paths[0].blocked_by_ifc);
  EXPECT_EQ(test::render_paths(g, paths), test::brute_force_escalations(*p));

  const auto report = escalation_report(g, paths);
  EXPECT_EQ(report["mode"], "nest-faithful");
  EXPECT_EQ(report["escalations"][0]["nodes"][0]["id"], "kasa");
}

TEST_F(ExampleHomeGraph, IfcModeMarksPathBlocked) {
  const auto p = make(PolicyMode::NestIfc);
  const auto g = build_graph(*p);
  const auto paths = find_escalations(g);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_TRUE(paths[0].blocked_by_ifc);
}

TEST_F(ExampleHomeGraph, ReplayReproducesEscalation) {
  auto p = make(PolicyMode::NestFaithful);
  const auto g = build_graph(*p);
  const auto r = replay_escalation(*p, g, find_escalations(g).at(0));
  EXPECT_TRUE(r.response.ok());
  EXPECT_TRUE(r.changed());
  EXPECT_TRUE(values_equal(r.after, Value(false)));

  auto q = make(PolicyMode::NestIfc);
  const auto gi = build_graph(*q);
  const auto ri = replay_escalation(*q, gi, find_escalations(gi).at(0));
  EXPECT_TRUE(ri.response.ok());
  EXPECT_FALSE(ri.changed());
}

TEST_F(ExampleHomeGraph, BothAwayRoutinesYieldPaths) {
  // A direct principal write may carry any value, so both equals-triggers
  // on away are reachable from kasa.
  auto p = test::nest_platform();
  test::install_example_home(*p, "nest_routines_full.json");
  const auto g = build_graph(*p);
  const auto paths = find_escalations(g);
  EXPECT_EQ(paths.size(), 2u);
  EXPECT_EQ(test::render_paths(g, paths), test::brute_force_escalations(*p));
}

/// Low app writes `a`; routines owned by a trusted product relay it.
std::unique_ptr<Platform> relay_home(bool second_trigger) {
  const Json schema = {{"home",
                        {{"a", {{"type", "bool"}, {"initial", false}}},
                         {"b", {{"type", "bool"}, {"initial", false}}},
                         {"h", {{"type", "bool"}, {"initial", false}, {"integrity", "high"}}}}}};
  const Json policy = {{"permissions",
                        {{{"id", "a_rw"}, {"clauses", {{{"path", "home/a"}, {"access", "read-write"}}}}},
                         {{"id", "all"}, {"clauses", {{{"path", "home/*"}, {"access", "read-write"}}}}}}}};
  auto p = std::make_unique<Platform>(std::make_shared<const HomeSchema>(HomeSchema::from_json(schema)),
                                      PolicyDocument::from_json(policy), 1);
  spawn_product(*p, test::manifest_with("app", {"a_rw"}));
  spawn_product(*p, test::manifest_with("hub", {"all"}, Integrity::High));
  p->routines().register_routine(Routine::from_json(
      {{"id", "relay"},
       {"owner", "hub"},
       {"trigger", {{"path", "home/a"}, {"predicate", "changed"}}},
       {"actions", {{{"type", "write"}, {"path", "home/b"}, {"value", true}}}}}));
  p->routines().register_routine(Routine::from_json(
      {{"id", "arm"},
       {"owner", "hub"},
       {"trigger", {{"path", "home/b"}, {"predicate", "equals"}, {"value", second_trigger}}},
       {"actions", {{{"type", "write"}, {"path", "home/h"}, {"value", true}}}}}));
  return p;
}

TEST(FlowGraphTest, ActsOnValueMustSatisfyNextTrigger) {
  const auto blocked = relay_home(false);
  const auto gb = build_graph(*blocked);
  EXPECT_TRUE(find_escalations(gb).empty());
  EXPECT_TRUE(test::brute_force_escalations(*blocked).empty());

  auto open = relay_home(true);
  const auto go = build_graph(*open);
  const auto paths = find_escalations(go);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes.size(), 6u);
  EXPECT_EQ(test::render_paths(go, paths),
            std::vector<std::string>{"app>home/a>routine:relay>home/b>routine:arm>home/h"});
  EXPECT_TRUE(replay_escalation(*open, go, paths[0]).changed());
}

TEST(FlowGraphTest, RevokedPrincipalsDropOut) {
  auto p = relay_home(true);
  p->revoke(p->policy().active_grant("app")->token);
  EXPECT_TRUE(find_escalations(build_graph(*p)).empty());
}

TEST(FlowGraphTest, RandomHomesMatchBruteForce) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto home = test::random_home(seed);
    const auto p = test::build_home(home, PolicyMode::NestFaithful);
    const auto g = build_graph(*p);
    const auto paths = find_escalations(g);
    auto rendered = test::render_paths(g, paths);
    // Shortest first, then by node order.
    for (std::size_t i = 1; i < paths.size(); ++i) {
      const auto& a = paths[i - 1].nodes;
      const auto& b = paths[i].nodes;
      EXPECT_TRUE(a.size() < b.size() || (a.size() == b.size() && a < b)) << "seed " << seed;
    }
    std::sort(rendered.begin(), rendered.end());
    EXPECT_EQ(rendered, test::brute_force_escalations(*p)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace dsb
