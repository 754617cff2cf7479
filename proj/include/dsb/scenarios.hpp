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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsb/platform.hpp"
#include "dsb/prober.hpp"

namespace dsb {

struct ScenarioOverrides {
  std::optional<PolicyMode> mode;
  /// true = strict certificate validation on every channel, false = broken.
  std::optional<bool> tls_strict;
  std::optional<std::uint64_t> seed;
  /// Enables steps gated with `only_if`.
  std::set<std::string> flags;
};

struct StepResult {
  std::string id;
  std::string op;
  /// ok | denied | error | skipped
  std::string status = "ok";
  std::optional<DenyReason> reason;
  std::optional<Errc> error;
  std::string detail;
  Json result;
  std::optional<CascadeTrace> cascade;
  /// probe steps only
  std::optional<PermissionMap> map;
  std::optional<MapDiff> diff;

  Json to_json() const;
};

struct AssertionResult {
  std::string id;
  std::string description;
  bool passed = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  PolicyMode mode = PolicyMode::NestFaithful;
  std::uint64_t seed = 0;
  std::vector<AssertionResult> assertions;
  std::vector<StepResult> steps;
  std::vector<ChangeEvent> event_log;
  std::vector<TraceRecord> request_trace;
  std::vector<CascadeTrace> cascades;
  std::vector<std::string> captured_tokens;
  std::map<std::string, std::string> bindings;

  bool passed() const;
  const StepResult* step(const std::string& id) const;
  const AssertionResult* assertion(const std::string& id) const;
  Json to_json() const;
};

/// A scenario script. Fixture references resolve against `base_dir` first
/// and then the compiled-in fixtures.
struct Scenario {
  Json doc;
  std::string base_dir;

  /// Throws Error{InvalidScenario}.
  static Scenario load_file(const std::string& path);
  /// Throws Error{UnknownScenario}.
  static Scenario builtin(const std::string& name);
};

std::vector<std::string> builtin_scenarios();

/// Loads `ref` from `base_dir` or the compiled-in fixtures; an inline JSON
/// object is returned unchanged. Throws Error{InvalidScenario}.
Json load_fixture(const Json& ref, const std::string& base_dir = {});

ScenarioReport run_scenario(const Scenario& scenario, const ScenarioOverrides& overrides = {});
/// Built-in by name. Throws Error{UnknownScenario}.
ScenarioReport run_scenario(const std::string& name, const ScenarioOverrides& overrides = {});

}  // namespace dsb
