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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>

#include "properties.hpp"

namespace dsb::test {
namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && passed) {
      passed = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioReport run(const std::string& name, std::optional<PolicyMode> mode = {},
                   std::optional<bool> tls_strict = {}, std::set<std::string> flags = {}) {
  ScenarioOverrides ov;
  ov.mode = mode;
  ov.tls_strict = tls_strict;
  ov.flags = std::move(flags);
  return run_scenario(name, ov);
}

bool step_is(const ScenarioReport& r, const std::string& id, const std::string& status) {
  const auto* s = r.step(id);
  return s && s->status == status;
}

Outcome permission_map() {
  Outcome o;
  auto p = nest_platform();
  const auto universe = path_universe(*p);
  const auto perms = p->policy().document().permission_ids();
  o.require(perms.size() == 15, "expected 15 permissions");

  const auto observed = derive_permission_map(*p, perms);
  const auto documented = documented_permission_map(
      PolicyDocument::from_json(load_fixture("nest_documented.json")), p->schema(), universe);
  const auto diff = diff_permission_map(observed, documented);
  o.require(diff.empty(), std::to_string(diff.entries.size()) + " differences from documentation");

  // Exhaustive decision check against the clause oracle.
  const auto policy_json = load_fixture("nest_policy.json");
  std::size_t decisions = 0;
  for (const auto& perm : perms) {
    p->register_product(manifest_with("holder-" + perm, {perm}));
    const auto g = p->authorize("holder-" + perm);
    for (const auto& path : universe) {
      for (auto kind : {AccessKind::Read, AccessKind::Write, AccessKind::Delete}) {
        const bool expected = oracle_allows(policy_json, p->schema(), perm, path, kind);
        const bool actual = static_cast<bool>(p->policy().check_access(g.token, Path::parse(path), kind));
        o.require(expected == actual, perm + " " + path + " decision mismatch");
        ++decisions;
      }
    }
  }
  o.detail = o.passed ? std::to_string(decisions) + " decisions, empty diff" : o.detail;
  return o;
}

Outcome linkbutton() {
  Outcome o;
  const auto f = run("f2-linkbutton");
  o.require(f.passed(), "faithful run assertions failed");
  o.require(step_is(f, "write-linkbutton", "ok"), "linkbutton write refused");
  o.require(step_is(f, "create-user", "ok") && f.bindings.count("rogue"), "no second token");
  const auto h = run("f2-linkbutton", PolicyMode::HueHardened);
  const auto* w = h.step("write-linkbutton");
  const auto* c = h.step("create-user");
  o.require(w && w->status == "denied", "hardened linkbutton write allowed");
  o.require(c && c->error == Errc::LinkButtonNotPressed, "hardened create-user not refused");
  return o;
}

Outcome whitelist_delete() {
  Outcome o;
  const auto f = run("f3-whitelist-delete");
  o.require(f.passed(), "faithful run assertions failed");
  o.require(step_is(f, "delete-alexa", "ok") && step_is(f, "delete-google", "ok"), "deletes refused");
  const auto* after = f.step("alexa-after");
  o.require(after && after->reason == DenyReason::Revoked, "victim token still works");
  const auto h = run("f3-whitelist-delete", PolicyMode::HueHardened);
  o.require(step_is(h, "delete-alexa", "denied") && step_is(h, "delete-google", "denied"),
            "hardened deletes allowed");
  return o;
}

bool streaming_changed(const ScenarioReport& r) {
  for (const auto& e : r.event_log) {
    if (e.path.str() == "devices/cameras/cam1/is_streaming") return true;
  }
  return false;
}

Outcome away_camera() {
  Outcome o;
  const auto f = run("f4-away-camera");
  o.require(f.passed(), "faithful run assertions failed");
  const auto* direct = f.step("direct-write");
  o.require(direct && direct->reason == DenyReason::NoClause, "direct write not denied no-clause");
  o.require(streaming_changed(f), "is_streaming unchanged");
  const auto i = run("f4-away-camera", PolicyMode::NestIfc);
  const auto* set_home = i.step("set-home");
  const auto* entry = set_home && set_home->cascade ? set_home->cascade->find("camera-off-when-home") : nullptr;
  o.require(entry && entry->actions.at(0).outcome == ActionOutcome::IfcBlocked, "cascade not ifc-blocked");
  o.require(!streaming_changed(i), "is_streaming changed under IFC");
  return o;
}

Outcome lateral() {
  Outcome o;
  const auto base = run("lateral-e2e");
  o.require(base.passed() && base.assertions.size() == 5, "default run assertions failed");
  const auto strict = run("lateral-e2e", std::nullopt, true);
  o.require(!strict.passed() && strict.captured_tokens.empty(), "strict TLS did not stop capture");
  const auto ifc = run("lateral-e2e", PolicyMode::NestIfc);
  o.require(!ifc.passed() && !ifc.assertion("5-recording-stopped")->passed, "IFC did not protect recording");
  const auto revoked = run("lateral-e2e", std::nullopt, std::nullopt, {"revoke-stolen"});
  const auto* w = revoked.step("attacker-write");
  o.require(!revoked.passed() && w && w->reason == DenyReason::Revoked, "revocation did not stop write");
  return o;
}

Outcome lint_corpus() {
  Outcome o;
  std::map<std::string, int> counts;
  for (const auto& m : manifests_from_json(load_fixture("lint_corpus.json"))) {
    const auto v = lint_manifest(m);
    o.require(v.size() == 1 && m.expected_category && to_string(v[0].category) == *m.expected_category,
              m.name + " misclassified");
    for (const auto& x : v) ++counts[std::string(to_string(x.category))];
  }
  o.require(counts["VC1"] == 9 && counts["VC2"] == 3 && counts["VC3"] == 2 && counts["VC4"] == 2,
            "category counts differ");
  if (o.passed) o.detail = "VC1=9 VC2=3 VC3=2 VC4=2";
  return o;
}

Outcome flowgraph() {
  Outcome o;
  const int homes = 1000;
  std::size_t paths_total = 0;
  for (int seed = 1; seed <= homes && o.passed; ++seed) {
    const auto home = random_home(static_cast<std::uint64_t>(seed));
    o.require(home.products.size() <= 8 && home.routines.size() <= 8, "generator out of bounds");
    const auto p = build_home(home, PolicyMode::NestFaithful);
    const auto g = build_graph(*p);
    const auto paths = find_escalations(g);
    auto rendered = render_paths(g, paths);
    std::sort(rendered.begin(), rendered.end());
    o.require(rendered == brute_force_escalations(*p), "seed " + std::to_string(seed) + ": oracle mismatch");
    for (const auto& path : paths) {
      auto fresh = build_home(home, PolicyMode::NestFaithful);
      o.require(replay_escalation(*fresh, build_graph(*fresh), path).changed(),
                "seed " + std::to_string(seed) + ": replay had no effect");
      auto guarded = build_home(home, PolicyMode::NestIfc);
      const auto gi = build_graph(*guarded);
      o.require(!replay_escalation(*guarded, gi, path).changed(),
                "seed " + std::to_string(seed) + ": IFC replay changed target");
    }
    paths_total += paths.size();
  }
  if (o.passed) o.detail = std::to_string(homes) + " homes, " + std::to_string(paths_total) + " paths replayed";
  return o;
}

Outcome property_suites() {
  Outcome o;
  for (const auto& prop : properties()) {
    for (int seed = 1; seed <= kPropertyCases; ++seed) {
      const auto failure = prop.check(static_cast<std::uint64_t>(seed));
      o.require(failure.empty(), std::string(prop.name) + " seed " + std::to_string(seed) + ": " + failure);
    }
  }
  if (o.passed) o.detail = std::to_string(properties().size()) + " properties x " + std::to_string(kPropertyCases) + " cases";
  return o;
}

struct Criterion {
  int number;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace dsb::test

int main() {
  using namespace dsb::test;
  const std::vector<Criterion> criteria = {
      {1, "permission map matches documentation and clause oracle", 5.0, permission_map},
      {2, "link button writable by clients; hardened mode refuses", 1.0, linkbutton},
      {3, "peer deletes whitelist entries; hardened mode refuses", 1.0, whitelist_delete},
      {4, "away write turns camera off; IFC blocks the cascade", 1.0, away_camera},
      {5, "end-to-end lateral escalation and its three mitigations", 1.0, lateral},
      {6, "description lint categories 9/3/2/2", 1.0, lint_corpus},
      {7, "flow-graph escalations match brute force and replay", 30.0, flowgraph},
      {8, "property suites", 120.0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds_since(t0);
    if (o.passed && s > c.budget_s) o = {false, "over time budget"};
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " ("
              << s << " s";
    if (!o.detail.empty()) std::cout << "; " << o.detail;
    std::cout << ")\n";
    failed += !o.passed;
  }
  return failed == 0 ? 0 : 1;
}
