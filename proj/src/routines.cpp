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

#include "dsb/routines.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dsb/error.hpp"

namespace dsb {

std::string describe(const Action& a) {
  if (const auto* w = std::get_if<WriteAction>(&a)) {
    return "write(" + w->path.str() + "=" + dsb::describe(w->value) + ")";
  }
  const auto& c = std::get<CommandAction>(a);
  return "device_command(" + c.product + "," + c.command + ")";
}

Routine Routine::from_json(const Json& j) {
  try {
    Routine r;
    r.id = j.value("id", std::string());
    r.owner = j.value("owner", std::string());
    const auto& t = j.at("trigger");
    r.trigger.path = Path::parse(t.at("path").get<std::string>());
    r.trigger.predicate = Predicate::from_json(t);
    for (const auto& a : j.at("actions")) {
      const auto type = a.at("type").get<std::string>();
      if (type == "write") {
        r.actions.push_back(
            WriteAction{Path::parse(a.at("path").get<std::string>()), value_from_json(a.at("value"))});
      } else if (type == "device_command") {
        r.actions.push_back(
            CommandAction{a.at("product").get<std::string>(), a.at("command").get<std::string>()});
      } else {
        throw Error(Errc::InvalidRoutine, "unknown action type '" + type + "'");
      }
    }
    r.enabled = j.value("enabled", true);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidRoutine, e.what());
  }
}

Json Routine::to_json() const {
  Json trigger_json{{"path", trigger.path.str()}};
  trigger_json.update(trigger.predicate.to_json());
  Json actions_json = Json::array();
  for (const auto& a : actions) {
    if (const auto* w = std::get_if<WriteAction>(&a)) {
      actions_json.push_back({{"type", "write"}, {"path", w->path.str()}, {"value", value_to_json(w->value)}});
    } else {
      const auto& c = std::get<CommandAction>(a);
      actions_json.push_back({{"type", "device_command"}, {"product", c.product}, {"command", c.command}});
    }
  }
  return Json{{"id", id}, {"owner", owner}, {"trigger", trigger_json},
              {"actions", actions_json}, {"enabled", enabled}};
}

std::vector<Routine> routines_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("routines") ? j["routines"] : j;
  if (!list.is_array()) throw Error(Errc::InvalidRoutine, "expected a list of routines");
  std::vector<Routine> out;
  for (const auto& r : list) out.push_back(Routine::from_json(r));
  return out;
}

std::string_view to_string(ActionOutcome o) {
  switch (o) {
    case ActionOutcome::Committed: return "committed";
    case ActionOutcome::Denied: return "denied";
    case ActionOutcome::IfcBlocked: return "ifc-blocked";
  }
  return "?";
}

const TraceEntry* CascadeTrace::find(const RoutineId& id) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const auto& e) { return e.routine == id; });
  return it == entries.end() ? nullptr : &*it;
}

Json CascadeTrace::to_json() const {
  Json list = Json::array();
  for (const auto& e : entries) {
    Json actions = Json::array();
    for (const auto& a : e.actions) {
      actions.push_back({{"action", a.action},
                         {"outcome", std::string(to_string(a.outcome))},
                         {"detail", a.detail},
                         {"revisions", a.revisions}});
    }
    list.push_back({{"routine", e.routine},
                    {"triggering_revision", e.triggering_revision},
                    {"depth", e.depth},
                    {"actions", actions}});
  }
  return Json{{"root_revision", root_revision},
              {"entries", list},
              {"depth_reached", depth_reached},
              {"truncated", truncated}};
}

RoutineEngine::RoutineEngine(DataStore& store, PolicyEngine& policy,
                             CommandDispatcher dispatch, int depth_limit)
    : store_(store), policy_(policy), dispatch_(std::move(dispatch)),
      depth_limit_(depth_limit) {}

RoutineId RoutineEngine::register_routine(Routine r) {
  if (!policy_.product(r.owner)) throw Error(Errc::UnknownOwner, r.owner);
  const auto* grant = policy_.active_grant(r.owner);
  if (!grant) throw Error(Errc::UnknownOwner, r.owner + " holds no grant");
  r.grant_token = grant->token;

  const auto* watched = store_.schema().find_static(r.trigger.path);
  if (!watched) throw Error(Errc::UnknownPath, r.trigger.path.str());
  r.trigger.predicate.check_type(watched->type);

  for (const auto& a : r.actions) {
    if (const auto* w = std::get_if<WriteAction>(&a)) {
      const auto spec = store_.schema().find(w->path);
      if (!spec) throw Error(Errc::UnknownPath, w->path.str());
      check_conforms(w->value, spec->type, w->path.str());
    } else if (!policy_.product(std::get<CommandAction>(a).product)) {
      throw Error(Errc::UnknownProduct, std::get<CommandAction>(a).product);
    }
  }
  if (r.id.empty()) r.id = "r" + std::to_string(routines_.size() + 1);
  if (find(r.id)) throw Error(Errc::InvalidRoutine, "duplicate routine id " + r.id);
  routines_.push_back(std::move(r));
  return routines_.back().id;
}

void RoutineEngine::set_enabled(const RoutineId& id, bool enabled) {
  auto it = std::find_if(routines_.begin(), routines_.end(),
                         [&](const auto& r) { return r.id == id; });
  if (it == routines_.end()) throw Error(Errc::InvalidRoutine, "unknown routine " + id);
  it->enabled = enabled;
}

const Routine* RoutineEngine::find(const RoutineId& id) const {
  auto it = std::find_if(routines_.begin(), routines_.end(),
                         [&](const auto& r) { return r.id == id; });
  return it == routines_.end() ? nullptr : &*it;
}

std::vector<Routine> RoutineEngine::list_routines(const std::optional<Path>& trigger_path) const {
  std::vector<Routine> out;
  for (const auto& r : routines_) {
    if (!trigger_path || r.trigger.path == *trigger_path) out.push_back(r);
  }
  return out;
}

CascadeTrace RoutineEngine::on_commit(const ChangeEvent& root) {
  CascadeTrace trace;
  trace.root_revision = root.revision;

  struct Pending {
    ChangeEvent event;
    int depth;
  };
  std::deque<Pending> queue;
  for (auto& e : store_.events_since(root.revision - 1)) queue.push_back({std::move(e), 0});

  std::set<RoutineId> fired;
  while (!queue.empty()) {
    const auto [event, depth] = queue.front();
    queue.pop_front();
    for (const auto& r : routines_) {
      if (!r.enabled || fired.count(r.id)) continue;
      if (r.trigger.path != event.path || !r.trigger.predicate.matches(event)) continue;
      if (depth + 1 > depth_limit_) {
        trace.truncated = true;
        continue;
      }
      fired.insert(r.id);
      const auto* owner = policy_.product(r.owner);
      const Integrity chain = min_integrity(event.writer_integrity, owner->integrity);

      TraceEntry entry{r.id, event.revision, depth + 1, {}};
      for (const auto& action : r.actions) {
        const Revision before = store_.revision();
        entry.actions.push_back(execute(r, action, chain));
        for (auto& e : store_.events_since(before)) queue.push_back({std::move(e), depth + 1});
      }
      trace.depth_reached = std::max(trace.depth_reached, depth + 1);
      trace.entries.push_back(std::move(entry));
    }
  }
  return trace;
}

ActionRecord RoutineEngine::execute(const Routine& r, const Action& a, Integrity chain) {
  ActionRecord rec;
  rec.action = describe(a);
  const auto* grant = policy_.find_grant(r.grant_token);
  const auto ctx = access_context(store_);
  const bool ifc = policy_.mode() == PolicyMode::NestIfc;

  try {
    if (const auto* w = std::get_if<WriteAction>(&a)) {
      const auto decision = policy_.check_grant(*grant, w->path, AccessKind::Write, ctx);
      if (!decision) {
        rec.outcome = ActionOutcome::Denied;
        rec.detail = std::string(to_string(*decision.reason));
        return rec;
      }
      const auto spec = store_.schema().find(w->path);
      if (ifc && chain == Integrity::Low && spec && spec->integrity == Integrity::High) {
        rec.outcome = ActionOutcome::IfcBlocked;
        rec.detail = "low-integrity chain cannot write " + w->path.str();
        return rec;
      }
      if (auto e = store_.set(w->path, w->value, {r.owner, chain, Cause::routine(r.id)})) {
        rec.revisions.push_back(e->revision);
      }
      return rec;
    }

    const auto& c = std::get<CommandAction>(a);
    const auto* target = policy_.product(c.product);
    if (grant->revoked) {
      rec.outcome = ActionOutcome::Denied;
      rec.detail = std::string(to_string(DenyReason::Revoked));
      return rec;
    }
    bool allowed = c.product == r.owner;
    if (!allowed && target->manifest.device) {
      for (const auto& v : store_.schema().variables()) {
        if (v.path.starts_with(*target->manifest.device) &&
            policy_.check_grant(*grant, v.path, AccessKind::Write, ctx)) {
          allowed = true;
          break;
        }
      }
    }
    if (!allowed) {
      rec.outcome = ActionOutcome::Denied;
      rec.detail = std::string(to_string(DenyReason::NoClause));
      return rec;
    }
    if (ifc && chain == Integrity::Low && target->integrity == Integrity::High) {
      rec.outcome = ActionOutcome::IfcBlocked;
      rec.detail = "low-integrity chain cannot command " + c.product;
      return rec;
    }
    for (const auto& e : dispatch_(c.product, c.command, min_integrity(chain, target->integrity))) {
      rec.revisions.push_back(e.revision);
    }
    return rec;
  } catch (const Error& e) {
    rec.outcome = ActionOutcome::Denied;
    rec.detail = e.what();
    return rec;
  }
}

}  // namespace dsb
