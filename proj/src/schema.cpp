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

#include "dsb/schema.hpp"

#include <algorithm>

#include "dsb/error.hpp"

namespace dsb {
namespace {

Mutability mutability_from_json(const Json& j) {
  const auto s = j.get<std::string>();
  if (s == "read-only") return Mutability::ReadOnly;
  if (s == "writable") return Mutability::Writable;
  throw Error(Errc::InvalidSchema, "mutability must be read-only|writable");
}

bool is_variable_node(const Json& j) {
  return j.is_object() && j.contains("type") && j.contains("initial");
}

bool is_collection_node(const Json& j) {
  return j.is_object() && j.contains("collection");
}

}  // namespace

std::string_view to_string(Mutability m) {
  return m == Mutability::ReadOnly ? "read-only" : "writable";
}

VariableSpec CollectionSpec::entry_spec(const std::string& key) const {
  VariableSpec spec;
  spec.path = path.child(key);
  spec.type = entry_type;
  spec.mutability = mutability;
  spec.integrity = integrity;
  spec.initial = dummy_value(entry_type);
  spec.deletable = true;
  return spec;
}

void HomeSchema::add_variable(VariableSpec spec) {
  if (index_.count(spec.path.str())) {
    throw Error(Errc::InvalidSchema, "duplicate variable " + spec.path.str());
  }
  check_conforms(spec.initial, spec.type, spec.path.str());
  index_[spec.path.str()] = variables_.size();
  variables_.push_back(std::move(spec));
}

HomeSchema HomeSchema::from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(Errc::InvalidSchema, "schema must be an object");
  HomeSchema schema;

  // Depth-first walk in document order; leaves are variable or collection
  // declarations.
  auto walk = [&](auto&& self, const Json& node,
                  std::vector<std::string>& trail) -> void {
    if (is_collection_node(node)) {
      const auto& c = node["collection"];
      CollectionSpec coll;
      coll.path = Path::from_segments(trail);
      coll.entry_type = type_from_json(c.at("type"));
      coll.mutability = mutability_from_json(c.value("mutability", Json("writable")));
      coll.integrity = integrity_from_string(c.value("integrity", std::string("high")));
      if (node.contains("entries")) {
        for (const auto& [key, val] : node["entries"].items()) {
          if (!is_valid_segment(key)) {
            throw Error(Errc::InvalidSchema, "bad entry key '" + key + "'");
          }
          Value v = value_from_json(val);
          check_conforms(v, coll.entry_type, coll.path.str() + "/" + key);
          coll.initial_entries.emplace_back(key, std::move(v));
        }
      }
      schema.collections_.push_back(std::move(coll));
      return;
    }
    if (is_variable_node(node)) {
      VariableSpec spec;
      spec.path = Path::from_segments(trail);
      spec.type = type_from_json(node["type"]);
      spec.mutability = mutability_from_json(node.value("mutability", Json("writable")));
      spec.integrity = integrity_from_string(node.value("integrity", std::string("low")));
      spec.initial = value_from_json(node["initial"]);
      spec.provenance = node.value("provenance", std::string("fixture"));
      schema.add_variable(std::move(spec));
      return;
    }
    if (!node.is_object()) {
      throw Error(Errc::InvalidSchema, "unexpected leaf under " +
                                           Path::from_segments(trail).str());
    }
    for (const auto& [key, child] : node.items()) {
      if (!is_valid_segment(key)) {
        throw Error(Errc::InvalidSchema, "bad key '" + key + "'");
      }
      trail.push_back(key);
      self(self, child, trail);
      trail.pop_back();
    }
  };

  for (const auto& [section, body] : doc.items()) {
    if (!is_valid_segment(section) || !body.is_object()) {
      throw Error(Errc::InvalidSchema, "bad top-level section '" + section + "'");
    }
    for (const auto& [key, child] : body.items()) {
      std::vector<std::string> trail{section, key};
      if (section == "structures") schema.structure_ids_.push_back(key);
      if (section == "devices") {
        for (const auto& [id, dev] : child.items()) {
          schema.devices_.push_back(
              {key, id, Path::from_segments({"devices", key, id})});
        }
      }
      walk(walk, child, trail);
    }
  }
  schema.validate();
  return schema;
}

void HomeSchema::validate() const {
  for (const auto& sid : structure_ids_) {
    const auto* away = find_static(Path::from_segments({"structures", sid, "away"}));
    if (!away || away->type != ValueType::enumeration({"home", "away"})) {
      throw Error(Errc::InvalidSchema,
                  "structure " + sid + " needs away: enum {home, away}");
    }
    const auto* postal = find_static(Path::from_segments({"structures", sid, "postal_code"}));
    if (!postal || postal->type.kind != ValueType::Kind::String) {
      throw Error(Errc::InvalidSchema, "structure " + sid + " needs postal_code: string");
    }
  }
  for (const auto& v : variables_) {
    if (v.path.segments()[0] == "devices" && v.path.size() != 4) {
      throw Error(Errc::InvalidSchema,
                  "device variable must be devices/<type>/<id>/<var>: " + v.path.str());
    }
    if (v.path.segments()[0] == "structures" && v.path.size() != 3) {
      throw Error(Errc::InvalidSchema,
                  "structure variable must be structures/<id>/<var>: " + v.path.str());
    }
  }
  for (const auto& d : devices_) {
    for (const char* common : {"name", "battery_health"}) {
      if (!find_static(d.prefix.child(common))) {
        throw Error(Errc::InvalidSchema,
                    d.prefix.str() + " is missing common variable " + common);
      }
    }
  }
  for (const auto& c : collections_) {
    if (find_static(c.path)) {
      throw Error(Errc::InvalidSchema, "collection shadows variable " + c.path.str());
    }
  }
}

const VariableSpec* HomeSchema::find_static(const Path& path) const {
  auto it = index_.find(path.str());
  return it == index_.end() ? nullptr : &variables_[it->second];
}

const CollectionSpec* HomeSchema::collection_for(const Path& entry_path) const {
  if (entry_path.size() < 3) return nullptr;
  const auto parent = entry_path.parent();
  for (const auto& c : collections_) {
    if (c.path == parent) return &c;
  }
  return nullptr;
}

std::optional<VariableSpec> HomeSchema::find(const Path& path) const {
  if (const auto* s = find_static(path)) return *s;
  if (const auto* c = collection_for(path)) return c->entry_spec(path.leaf());
  return std::nullopt;
}

std::optional<DeviceInfo> HomeSchema::device_of(const Path& path) const {
  for (const auto& d : devices_) {
    if (path.starts_with(d.prefix)) return d;
  }
  return std::nullopt;
}

}  // namespace dsb
