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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dsb/platform.hpp"

namespace dsb {

enum class NodeKind { Principal, Variable, Routine };
enum class EdgeKind { Writes, Triggers, ActsOn };
std::string_view to_string(NodeKind k);
std::string_view to_string(EdgeKind k);

using NodeIndex = std::size_t;

struct FlowNode {
  NodeKind kind = NodeKind::Variable;
  /// Product id, canonical path, or routine id.
  std::string id;
  Integrity integrity = Integrity::Low;  // routines take their owner's label
};

struct FlowEdge {
  NodeIndex from = 0;
  NodeIndex to = 0;
  EdgeKind kind = EdgeKind::Writes;
  /// ActsOn: value the routine writes (absent for device commands).
  std::optional<Value> value;
};

/// Integrity flow graph over installed grants and routines. Nodes are
/// ordered principals (by id), variables (schema order), routines
/// (registration order).
struct FlowGraph {
  PolicyMode mode = PolicyMode::NestFaithful;
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  /// Trigger predicate per routine node, parallel to `nodes`.
  std::vector<std::optional<Predicate>> predicates;

  std::optional<NodeIndex> find(NodeKind kind, const std::string& id) const;
  std::vector<const FlowEdge*> out_edges(NodeIndex n) const;
  bool has_edge(NodeIndex from, NodeIndex to, EdgeKind kind) const;
  Json to_json() const;
};

/// Whether a write of `written` (absent: any value) can satisfy `p`.
bool may_trigger(const Predicate& p, const std::optional<Value>& written);

FlowGraph build_graph(const Platform& platform);

struct EscalationPath {
  /// principal, variable, routine, variable, ..., variable
  std::vector<NodeIndex> nodes;
  Integrity source_integrity = Integrity::Low;
  Integrity target_integrity = Integrity::High;
  bool blocked_by_ifc = false;

  friend bool operator==(const EscalationPath&, const EscalationPath&) = default;
};

/// Simple paths from a low-integrity principal to a high-integrity
/// variable it cannot write directly; shortest first, then by node order.
std::vector<EscalationPath> find_escalations(const FlowGraph& g);

Json escalation_report(const FlowGraph& g, const std::vector<EscalationPath>& paths);

struct ReplayResult {
  Response response;
  /// Final variable value before and after the source write.
  Value before;
  Value after;
  bool changed() const { return !values_equal(before, after); }
};

/// Has the path's source principal write the first variable with a value
/// that satisfies the next routine's trigger.
ReplayResult replay_escalation(Platform& platform, const FlowGraph& g, const EscalationPath& path);

}  // namespace dsb
