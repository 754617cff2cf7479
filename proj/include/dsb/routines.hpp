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

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsb/datastore.hpp"
#include "dsb/policy.hpp"
#include "dsb/predicate.hpp"

namespace dsb {

using RoutineId = std::string;

struct Trigger {
  Path path;
  Predicate predicate;
};

struct WriteAction {
  Path path;
  Value value;
};

struct CommandAction {
  ProductId product;
  std::string command;
};

using Action = std::variant<WriteAction, CommandAction>;

std::string describe(const Action& a);

struct Routine {
  RoutineId id;
  ProductId owner;
  Trigger trigger;
  std::vector<Action> actions;
  bool enabled = true;
  /// Owner grant bound at registration.
  Token grant_token;

  static Routine from_json(const Json& j);
  Json to_json() const;
};

std::vector<Routine> routines_from_json(const Json& j);

enum class ActionOutcome { Committed, Denied, IfcBlocked };
std::string_view to_string(ActionOutcome o);

struct ActionRecord {
  std::string action;
  ActionOutcome outcome = ActionOutcome::Committed;
  /// Deny reason or error detail.
  std::string detail;
  /// Revisions of events the action committed (empty for a no-op write).
  std::vector<Revision> revisions;
};

struct TraceEntry {
  RoutineId routine;
  Revision triggering_revision = 0;
  int depth = 0;
  std::vector<ActionRecord> actions;
};

struct CascadeTrace {
  Revision root_revision = 0;
  std::vector<TraceEntry> entries;
  int depth_reached = 0;
  bool truncated = false;

  const TraceEntry* find(const RoutineId& id) const;
  Json to_json() const;
};

/// Runs a product command against its device, returning committed events.
using CommandDispatcher = std::function<std::vector<ChangeEvent>(
    const ProductId&, const std::string& command, Integrity chain)>;

/// Trigger-action engine. Actions run under the owner's grant; in nest-ifc
/// mode a routine write to a high-integrity variable whose causal chain is
/// low is blocked.
class RoutineEngine {
 public:
  static constexpr int kDefaultDepthLimit = 8;

  RoutineEngine(DataStore& store, PolicyEngine& policy, CommandDispatcher dispatch,
                int depth_limit = kDefaultDepthLimit);

  /// Throws Error{UnknownOwner}, Error{UnknownPath}, Error{TypeMismatch},
  /// Error{InvalidRoutine}.
  RoutineId register_routine(Routine r);
  void set_enabled(const RoutineId& id, bool enabled);

  /// Evaluates routines against `root` and every event committed
  /// synchronously after it, cascading until quiescence or the depth
  /// limit. Each routine fires at most once per call.
  CascadeTrace on_commit(const ChangeEvent& root);

  /// All routines, or those watching `trigger_path`; registration order.
  std::vector<Routine> list_routines(const std::optional<Path>& trigger_path = {}) const;
  const std::vector<Routine>& routines() const { return routines_; }
  const Routine* find(const RoutineId& id) const;
  int depth_limit() const { return depth_limit_; }

 private:
  ActionRecord execute(const Routine& r, const Action& a, Integrity chain);

  DataStore& store_;
  PolicyEngine& policy_;
  CommandDispatcher dispatch_;
  int depth_limit_;
  std::vector<Routine> routines_;
};

}  // namespace dsb
