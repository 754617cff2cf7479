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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsb/path.hpp"
#include "dsb/value.hpp"

namespace dsb {

enum class Mutability { ReadOnly, Writable };

std::string_view to_string(Mutability m);

struct VariableSpec {
  Path path;
  ValueType type;
  Mutability mutability = Mutability::Writable;
  Integrity integrity = Integrity::Low;
  Value initial;
  bool deletable = false;
  /// "documented" for variables the platform documentation attests, "fixture"
  /// for filler.
  std::string provenance = "fixture";

  bool read_only() const { return mutability == Mutability::ReadOnly; }
};

/// A keyed set of dynamically created entries, e.g. Hue's
/// `config/whitelist/<token>`. Entries share one template spec and are the
/// only deletable nodes in a schema.
struct CollectionSpec {
  Path path;
  ValueType entry_type;
  Mutability mutability = Mutability::Writable;
  Integrity integrity = Integrity::High;
  std::vector<std::pair<std::string, Value>> initial_entries;

  VariableSpec entry_spec(const std::string& key) const;
};

struct DeviceInfo {
  std::string type;
  std::string id;
  Path prefix;  // devices/<type>/<id>
};

/// Declared shape of one home: every variable with its type, mutability,
/// integrity and initial value.
class HomeSchema {
 public:
  static HomeSchema from_json(const Json& doc);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const std::vector<CollectionSpec>& collections() const { return collections_; }
  const std::vector<DeviceInfo>& devices() const { return devices_; }
  const std::vector<std::string>& structure_ids() const { return structure_ids_; }

  /// Static variable or collection-entry template for `path`.
  std::optional<VariableSpec> find(const Path& path) const;
  const VariableSpec* find_static(const Path& path) const;
  const CollectionSpec* collection_for(const Path& entry_path) const;
  std::optional<DeviceInfo> device_of(const Path& path) const;

  bool is_nest() const { return !structure_ids_.empty(); }

 private:
  void add_variable(VariableSpec spec);
  void validate() const;

  std::vector<VariableSpec> variables_;
  std::map<std::string, std::size_t> index_;
  std::vector<CollectionSpec> collections_;
  std::vector<DeviceInfo> devices_;
  std::vector<std::string> structure_ids_;
};

}  // namespace dsb
