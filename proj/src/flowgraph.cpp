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

#include "dsb/flowgraph.hpp"

#include <algorithm>
#include <functional>

namespace dsb {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Principal: return "principal";
    case NodeKind::Variable: return "variable";
    case NodeKind::Routine: return "routine";
  }
  return "?";
}

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Writes: return "writes";
    case EdgeKind::Triggers: return "triggers";
    case EdgeKind::ActsOn: return "acts-on";
  }
  return "?";
}

std::optional<NodeIndex> FlowGraph::find(NodeKind kind, const std::string& id) const {
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == kind && nodes[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<const FlowEdge*> FlowGraph::out_edges(NodeIndex n) const {
  std::vector<const FlowEdge*> out;
  for (const auto& e : edges) {
    if (e.from == n) out.push_back(&e);
  }
  return out;
}

bool FlowGraph::has_edge(NodeIndex from, NodeIndex to, EdgeKind kind) const {
  return std::any_of(edges.begin(), edges.end(), [&](const FlowEdge& e) {
    return e.from == from && e.to == to && e.kind == kind;
  });
}

Json FlowGraph::to_json() const {
  Json ns = Json::array();
  for (const auto& n : nodes) {
    ns.push_back({{"kind", std::string(to_string(n.kind))},
                  {"id", n.id},
                  {"integrity", std::string(to_string(n.integrity))}});
  }
  Json es = Json::array();
  for (const auto& e : edges) {
    Json ej{{"kind", std::string(to_string(e.kind))},
            {"from", nodes[e.from].id},
            {"to", nodes[e.to].id}};
    if (e.value) ej["value"] = value_to_json(*e.value);
    es.push_back(std::move(ej));
  }
  return Json{{"mode", std::string(to_string(mode))}, {"nodes", ns}, {"edges", es}};
}

bool may_trigger(const Predicate& p, const std::optional<Value>& written) {
  if (!written) return true;
  switch (p.kind) {
    case Predicate::Kind::Changed: return true;
    case Predicate::Kind::Equals: return values_equal(*written, *p.value);
    case Predicate::Kind::Crossed: {
      const auto* w = std::get_if<double>(&*written);
      if (!w) return false;
      return p.direction == Predicate::Direction::Up ? *w >= p.threshold : *w <= p.threshold;
    }
  }
  return false;
}

FlowGraph build_graph(const Platform& platform) {
  FlowGraph g;
  g.mode = platform.mode();
  const auto& policy = platform.policy();
  const auto& store = platform.store();
  const AccessContext ctx{};

  // Principals with an active grant, sorted by product id.
  std::vector<std::pair<ProductId, const Grant*>> principals;
  for (const auto& [id, rec] : policy.products()) {
    if (const auto* grant = policy.active_grant(id)) principals.emplace_back(id, grant);
  }
  for (const auto& [id, _] : principals) {
    g.nodes.push_back({NodeKind::Principal, id, policy.product(id)->integrity});
  }
  std::vector<Path> vars;
  for (const auto& [path, _] : store.snapshot().values) vars.push_back(Path::parse(path));
  // Schema order for static variables, collection entries after.
  std::stable_sort(vars.begin(), vars.end(), [&](const Path& a, const Path& b) {
    auto rank = [&](const Path& p) -> std::size_t {
      const auto& vs = platform.schema().variables();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].path == p) return i;
      }
      return vs.size();
    };
    return rank(a) < rank(b);
  });
  const NodeIndex var_base = g.nodes.size();
  for (const auto& p : vars) {
    g.nodes.push_back({NodeKind::Variable, p.str(), store.spec(p).integrity});
  }
  const NodeIndex routine_base = g.nodes.size();
  const auto& routines = platform.routines().routines();
  for (const auto& r : routines) {
    g.nodes.push_back({NodeKind::Routine, r.id, policy.product(r.owner)->integrity});
  }
  g.predicates.resize(g.nodes.size());
  for (std::size_t i = 0; i < routines.size(); ++i) {
    g.predicates[routine_base + i] = routines[i].trigger.predicate;
  }

  auto var_index = [&](const Path& p) -> std::optional<NodeIndex> {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == p) return var_base + i;
    }
    return std::nullopt;
  };

  for (std::size_t pi = 0; pi < principals.size(); ++pi) {
    for (std::size_t vi = 0; vi < vars.size(); ++vi) {
      if (policy.check_grant(*principals[pi].second, vars[vi], AccessKind::Write, ctx)) {
        g.edges.push_back({pi, var_base + vi, EdgeKind::Writes, std::nullopt});
      }
    }
  }

  for (std::size_t ri = 0; ri < routines.size(); ++ri) {
    const auto& r = routines[ri];
    const NodeIndex rn = routine_base + ri;
    if (!r.enabled) continue;
    if (auto v = var_index(r.trigger.path)) g.edges.push_back({*v, rn, EdgeKind::Triggers, std::nullopt});
    const auto* grant = policy.find_grant(r.grant_token);
    if (!grant || grant->revoked) continue;
    for (const auto& a : r.actions) {
      if (const auto* w = std::get_if<WriteAction>(&a)) {
        const auto v = var_index(w->path);
        if (v && policy.check_grant(*grant, w->path, AccessKind::Write, ctx)) {
          const bool repeat = std::any_of(g.edges.begin(), g.edges.end(), [&](const FlowEdge& e) {
            return e.from == rn && e.to == *v && e.kind == EdgeKind::ActsOn && e.value &&
                   values_equal(*e.value, w->value);
          });
          if (!repeat) g.edges.push_back({rn, *v, EdgeKind::ActsOn, w->value});
        }
        continue;
      }
      const auto& c = std::get<CommandAction>(a);
      const auto* target = policy.product(c.product);
      if (!target || !target->manifest.device) continue;
      const auto& dev = *target->manifest.device;
      bool allowed = c.product == r.owner;
      for (const auto& p : vars) {
        if (!allowed && p.starts_with(dev) && policy.check_grant(*grant, p, AccessKind::Write, ctx)) {
          allowed = true;
        }
      }
      if (!allowed) continue;
      for (std::size_t vi = 0; vi < vars.size(); ++vi) {
        if (vars[vi].starts_with(dev) && store.spec(vars[vi]).read_only()) {
          g.edges.push_back({rn, var_base + vi, EdgeKind::ActsOn, std::nullopt});
        }
      }
    }
  }
  return g;
}

namespace {

bool ifc_blocks(const FlowGraph& g, const std::vector<NodeIndex>& path) {
  if (g.mode != PolicyMode::NestIfc) return false;
  Integrity chain = g.nodes[path.front()].integrity;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& n = g.nodes[path[i]];
    if (n.kind == NodeKind::Routine) chain = min_integrity(chain, n.integrity);
    if (n.kind == NodeKind::Variable && i > 1 && chain == Integrity::Low &&
        n.integrity == Integrity::High) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<EscalationPath> find_escalations(const FlowGraph& g) {
  std::vector<EscalationPath> out;
  std::vector<NodeIndex> path;
  std::vector<bool> on_path(g.nodes.size(), false);

  // `written`: value carried into the current variable (absent = any).
  std::function<void(NodeIndex, const std::optional<Value>&)> visit_var =
      [&](NodeIndex v, const std::optional<Value>& written) {
        const NodeIndex src = path.front();
        if (path.size() >= 4 && g.nodes[v].integrity == Integrity::High &&
            !g.has_edge(src, v, EdgeKind::Writes)) {
          out.push_back({path, g.nodes[src].integrity, Integrity::High, ifc_blocks(g, path)});
        }
        for (const auto* t : g.out_edges(v)) {
          if (t->kind != EdgeKind::Triggers || on_path[t->to]) continue;
          if (!may_trigger(*g.predicates[t->to], written)) continue;
          path.push_back(t->to);
          on_path[t->to] = true;
          for (const auto* a : g.out_edges(t->to)) {
            if (a->kind != EdgeKind::ActsOn || on_path[a->to]) continue;
            path.push_back(a->to);
            on_path[a->to] = true;
            visit_var(a->to, a->value);
            on_path[a->to] = false;
            path.pop_back();
          }
          on_path[t->to] = false;
          path.pop_back();
        }
      };

  for (NodeIndex p = 0; p < g.nodes.size(); ++p) {
    if (g.nodes[p].kind != NodeKind::Principal || g.nodes[p].integrity != Integrity::Low) continue;
    path = {p};
    on_path[p] = true;
    for (const auto* w : g.out_edges(p)) {
      if (w->kind != EdgeKind::Writes) continue;
      path.push_back(w->to);
      on_path[w->to] = true;
      visit_var(w->to, std::nullopt);
      on_path[w->to] = false;
      path.pop_back();
    }
    on_path[p] = false;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  // Two acts-on edges with different values can yield the same node sequence.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) { return a.nodes == b.nodes; }),
            out.end());
  return out;
}

Json escalation_report(const FlowGraph& g, const std::vector<EscalationPath>& paths) {
  Json list = Json::array();
  for (const auto& p : paths) {
    Json nodes = Json::array();
    for (auto n : p.nodes) {
      nodes.push_back({{"kind", std::string(to_string(g.nodes[n].kind))},
                       {"id", g.nodes[n].id},
                       {"integrity", std::string(to_string(g.nodes[n].integrity))}});
    }
    list.push_back({{"nodes", nodes},
                    {"source_integrity", std::string(to_string(p.source_integrity))},
                    {"target_integrity", std::string(to_string(p.target_integrity))},
                    {"blocked_by_ifc", p.blocked_by_ifc}});
  }
  return Json{{"mode", std::string(to_string(g.mode))},
              {"node_count", g.nodes.size()},
              {"edge_count", g.edges.size()},
              {"escalations", list}};
}

ReplayResult replay_escalation(Platform& platform, const FlowGraph& g, const EscalationPath& path) {
  const auto& source = g.nodes[path.nodes.at(0)].id;
  const auto first = Path::parse(g.nodes[path.nodes.at(1)].id);
  const auto target = Path::parse(g.nodes[path.nodes.back()].id);
  const auto& pred = *g.predicates[path.nodes.at(2)];

  Value v = platform.store().get(first);
  if (pred.kind == Predicate::Kind::Equals) {
    v = *pred.value;
  } else if (pred.kind == Predicate::Kind::Crossed) {
    v = pred.direction == Predicate::Direction::Up ? pred.threshold + 1.0 : pred.threshold - 1.0;
  } else if (const auto* b = std::get_if<bool>(&v)) {
    v = !*b;
  } else if (const auto* d = std::get_if<double>(&v)) {
    v = *d + 1.0;
  } else {
    const auto spec = platform.store().spec(first);
    if (spec.type.kind == ValueType::Kind::Enum) {
      for (const auto& e : spec.type.enum_values) {
        if (!values_equal(Value(e), v)) {
          v = e;
          break;
        }
      }
    } else {
      v = std::get<std::string>(v) + "-replay";
    }
  }

  ReplayResult r;
  r.before = platform.store().get(target);
  const auto* grant = platform.policy().active_grant(source);
  r.response = platform.put(first.str(), v, grant ? grant->token : Token{});
  r.after = platform.store().get(target);
  return r;
}

}  // namespace dsb
