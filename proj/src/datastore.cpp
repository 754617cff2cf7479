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

#include "dsb/datastore.hpp"

#include <algorithm>

#include "dsb/error.hpp"

namespace dsb {

std::string_view to_string(Cause::Kind k) {
  switch (k) {
    case Cause::Kind::ExternalRequest: return "external-request";
    case Cause::Kind::RoutineAction: return "routine-action";
    case Cause::Kind::DeviceBehavior: return "device-behavior";
    case Cause::Kind::System: return "system";
  }
  return "?";
}

Json event_to_json(const ChangeEvent& e) {
  Json j;
  j["revision"] = e.revision;
  j["path"] = e.path.str();
  j["old_value"] = value_to_json(e.old_value);
  j["new_value"] = e.new_value ? value_to_json(*e.new_value) : Json("<tombstone>");
  j["writer"] = e.writer;
  j["writer_integrity"] = std::string(to_string(e.writer_integrity));
  j["cause"] = std::string(to_string(e.cause.kind));
  j["cause_ref"] = e.cause.ref;
  return j;
}

void write_jsonl(std::ostream& os, const std::vector<ChangeEvent>& events) {
  for (const auto& e : events) os << event_to_json(e).dump() << '\n';
}

Json Snapshot::to_json() const {
  Json root = Json::object();
  for (const auto& [path, value] : values) {
    Json* node = &root;
    const auto p = Path::parse(path);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      node = &(*node)[p.segments()[i]];
    }
    (*node)[p.leaf()] = value_to_json(value);
  }
  return Json{{"revision", revision}, {"data", root}};
}

bool operator==(const Snapshot& a, const Snapshot& b) {
  if (a.revision != b.revision || a.values.size() != b.values.size()) return false;
  return std::equal(a.values.begin(), a.values.end(), b.values.begin(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && values_equal(x.second, y.second);
                    });
}

DataStore::DataStore(std::shared_ptr<const HomeSchema> schema)
    : schema_(std::move(schema)) {
  for (const auto& v : schema_->variables()) values_[v.path.str()] = v.initial;
  for (const auto& c : schema_->collections()) {
    for (const auto& [key, value] : c.initial_entries) {
      values_[c.path.child(key).str()] = value;
    }
  }
  principals_.insert(kSystemPrincipal);
}

void DataStore::register_principal(const PrincipalId& id) { principals_.insert(id); }

bool DataStore::knows_principal(const PrincipalId& id) const {
  return principals_.count(id) != 0;
}

bool DataStore::contains(const Path& path) const {
  return values_.count(path.str()) != 0;
}

Value DataStore::get(const Path& path) const {
  auto it = values_.find(path.str());
  if (it == values_.end()) throw Error(Errc::UnknownPath, path.str());
  return it->second;
}

VariableSpec DataStore::spec(const Path& path) const {
  if (!contains(path)) throw Error(Errc::UnknownPath, path.str());
  return *schema_->find(path);
}

void DataStore::check_writer(const WriteContext& ctx) const {
  if (!knows_principal(ctx.writer)) {
    throw Error(Errc::UnknownPrincipal, ctx.writer);
  }
}

std::optional<ChangeEvent> DataStore::set(const Path& path, const Value& value,
                                          const WriteContext& ctx) {
  const auto s = spec(path);
  check_writer(ctx);
  check_conforms(value, s.type, path.str());
  if (s.read_only() && ctx.cause.kind == Cause::Kind::ExternalRequest) {
    throw Error(Errc::ReadOnlyVariable, path.str());
  }
  auto& current = values_.at(path.str());
  if (values_equal(current, value)) return std::nullopt;
  auto old = current;
  current = value;
  return commit(path, std::move(old), value, ctx);
}

ChangeEvent DataStore::create(const Path& path, const Value& value,
                              const WriteContext& ctx) {
  const auto* coll = schema_->collection_for(path);
  if (!coll) throw Error(Errc::UnknownPath, path.str() + " is not a collection entry");
  if (contains(path)) throw Error(Errc::InvalidPath, path.str() + " already exists");
  check_writer(ctx);
  check_conforms(value, coll->entry_type, path.str());
  values_[path.str()] = value;
  return commit(path, std::nullopt, value, ctx);
}

ChangeEvent DataStore::erase(const Path& path, const WriteContext& ctx) {
  const auto s = spec(path);
  if (!s.deletable) throw Error(Errc::NotDeletable, path.str());
  check_writer(ctx);
  auto it = values_.find(path.str());
  auto old = std::move(it->second);
  values_.erase(it);
  return commit(path, std::move(old), std::nullopt, ctx);
}

ChangeEvent DataStore::commit(const Path& path, std::optional<Value> old_value,
                              std::optional<Value> new_value,
                              const WriteContext& ctx) {
  ChangeEvent e;
  e.revision = ++revision_;
  e.path = path;
  e.old_value = std::move(old_value);
  e.new_value = std::move(new_value);
  e.writer = ctx.writer;
  e.writer_integrity = ctx.integrity;
  e.cause = ctx.cause;
  log_.push_back(e);
  pending_.push_back(e);
  drain();
  return e;
}

void DataStore::drain() {
  if (delivering_) return;
  delivering_ = true;
  try {
    while (!pending_.empty()) {
      const ChangeEvent e = pending_.front();
      pending_.pop_front();
      // Index loop: callbacks may add subscriptions.
      for (std::size_t i = 0; i < subscriptions_.size(); ++i) {
        if (subscriptions_[i].pattern.matches(e.path)) {
          auto cb = subscriptions_[i].callback;
          cb(e);
        }
      }
    }
  } catch (...) {
    delivering_ = false;
    pending_.clear();
    throw;
  }
  delivering_ = false;
}

SubscriptionId DataStore::subscribe(std::string_view pattern,
                                    const PrincipalId& subscriber, Callback cb) {
  auto parsed = PathPattern::parse(pattern);
  const auto id = next_subscription_++;
  subscriptions_.push_back({id, std::move(parsed), subscriber, std::move(cb)});
  return id;
}

void DataStore::unsubscribe(SubscriptionId id) {
  std::erase_if(subscriptions_, [id](const auto& s) { return s.id == id; });
}

Snapshot DataStore::snapshot() const { return Snapshot{revision_, values_}; }

std::vector<ChangeEvent> DataStore::events_since(Revision after) const {
  std::vector<ChangeEvent> out;
  auto it = std::find_if(log_.begin(), log_.end(),
                         [after](const auto& e) { return e.revision > after; });
  out.assign(it, log_.end());
  return out;
}

DataStore DataStore::fork() const {
  DataStore copy(schema_);
  copy.values_ = values_;
  copy.principals_ = principals_;
  copy.revision_ = revision_;
  return copy;
}

}  // namespace dsb
