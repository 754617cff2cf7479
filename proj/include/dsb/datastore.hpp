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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "dsb/path.hpp"
#include "dsb/schema.hpp"
#include "dsb/value.hpp"

namespace dsb {

using PrincipalId = std::string;
using Revision = std::uint64_t;
using SubscriptionId = std::uint64_t;

inline const PrincipalId kSystemPrincipal = "system";

struct Cause {
  enum class Kind { ExternalRequest, RoutineAction, DeviceBehavior, System };

  Kind kind = Kind::System;
  /// Routine id for RoutineAction, product id for DeviceBehavior.
  std::string ref;

  static Cause external() { return {Kind::ExternalRequest, {}}; }
  static Cause routine(std::string id) { return {Kind::RoutineAction, std::move(id)}; }
  static Cause device(std::string id) { return {Kind::DeviceBehavior, std::move(id)}; }
  static Cause system() { return {Kind::System, {}}; }

  friend bool operator==(const Cause&, const Cause&) = default;
};

std::string_view to_string(Cause::Kind k);

/// Who is committing a write, with the integrity of the causal chain
/// that led to it.
struct WriteContext {
  PrincipalId writer;
  Integrity integrity = Integrity::Low;
  Cause cause;

  static WriteContext system() {
    return {kSystemPrincipal, Integrity::High, Cause::system()};
  }
};

struct ChangeEvent {
  Revision revision = 0;
  Path path;
  std::optional<Value> old_value;  // absent: entry created
  std::optional<Value> new_value;  // absent: tombstone
  PrincipalId writer;
  Integrity writer_integrity = Integrity::Low;
  Cause cause;

  bool is_tombstone() const { return !new_value.has_value(); }
};

Json event_to_json(const ChangeEvent& e);
void write_jsonl(std::ostream& os, const std::vector<ChangeEvent>& events);

struct Snapshot {
  Revision revision = 0;
  std::map<std::string, Value> values;  // canonical path -> value

  /// Nested document mirroring the store tree.
  Json to_json() const;
  friend bool operator==(const Snapshot& a, const Snapshot& b);
};

/// Versioned document tree of state variables. All mutation goes through a
/// single commit order; events are delivered to subscribers synchronously
/// and in commit order, including events committed by subscribers
/// themselves.
///
/// Not thread-safe: callers serialize access (the platform does).
class DataStore {
 public:
  using Callback = std::function<void(const ChangeEvent&)>;

  explicit DataStore(std::shared_ptr<const HomeSchema> schema);

  const HomeSchema& schema() const { return *schema_; }
  std::shared_ptr<const HomeSchema> schema_ptr() const { return schema_; }

  void register_principal(const PrincipalId& id);
  bool knows_principal(const PrincipalId& id) const;

  bool contains(const Path& path) const;
  /// Throws Error{UnknownPath}.
  Value get(const Path& path) const;
  /// Spec of a live node. Throws Error{UnknownPath}.
  VariableSpec spec(const Path& path) const;

  /// Returns the event, or nullopt when `value` equals the current value.
  std::optional<ChangeEvent> set(const Path& path, const Value& value,
                                 const WriteContext& ctx);
  /// Adds a collection entry. Throws if the entry exists or `path` is not
  /// under a collection.
  ChangeEvent create(const Path& path, const Value& value, const WriteContext& ctx);
  /// Removes a deletable node. Throws Error{UnknownPath} or
  /// Error{NotDeletable}.
  ChangeEvent erase(const Path& path, const WriteContext& ctx);

  SubscriptionId subscribe(std::string_view pattern, const PrincipalId& subscriber,
                           Callback cb);
  void unsubscribe(SubscriptionId id);

  Snapshot snapshot() const;
  Revision revision() const { return revision_; }
  const std::vector<ChangeEvent>& log() const { return log_; }
  std::vector<ChangeEvent> events_since(Revision after) const;

  /// Independent copy of values, principals and revision. Subscriptions
  /// and the event log are not carried over.
  DataStore fork() const;

 private:
  struct Subscription {
    SubscriptionId id;
    PathPattern pattern;
    PrincipalId subscriber;
    Callback callback;
  };

  void check_writer(const WriteContext& ctx) const;
  ChangeEvent commit(const Path& path, std::optional<Value> old_value,
                     std::optional<Value> new_value, const WriteContext& ctx);
  void drain();

  std::shared_ptr<const HomeSchema> schema_;
  std::map<std::string, Value> values_;
  std::set<PrincipalId> principals_;
  Revision revision_ = 0;
  std::vector<ChangeEvent> log_;
  std::vector<Subscription> subscriptions_;
  SubscriptionId next_subscription_ = 1;
  std::deque<ChangeEvent> pending_;
  bool delivering_ = false;
};

}  // namespace dsb
